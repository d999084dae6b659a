# Generated by Django 5.2.3 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('check_name', models.CharField(db_index=True, max_length=64)),
                ('params', models.JSONField(blank=True, default=dict)),
                ('value', models.FloatField()),
                ('tolerance', models.FloatField()),
                ('passed', models.BooleanField(default=False)),
                ('seed', models.BigIntegerField(blank=True, null=True)),
                ('n_samples', models.BigIntegerField(blank=True, null=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Verification Run',
                'verbose_name_plural': 'Verification Runs',
                'ordering': ['-created_at', '-id'],
            },
        ),
    ]
