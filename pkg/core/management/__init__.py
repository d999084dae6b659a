# Init file for management commands
