from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SimulationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        choices=[
                            ("simulate", "Simulate"),
                            ("analyze", "Analyze"),
                            ("scenarios", "Scenarios"),
                        ],
                        max_length=20,
                    ),
                ),
                ("scenario", models.CharField(max_length=100)),
                ("seed", models.PositiveIntegerField(blank=True, null=True)),
                ("config_hash", models.CharField(db_index=True, max_length=64)),
                ("package_version", models.CharField(max_length=20)),
                ("n_nodes", models.PositiveIntegerField()),
                ("n_links", models.PositiveIntegerField()),
                ("clustering", models.FloatField(blank=True, null=True)),
                ("delta_minus", models.FloatField(blank=True, null=True)),
                ("delta_plus", models.FloatField(blank=True, null=True)),
                ("wall_time", models.FloatField(help_text="Seconds")),
                ("output_dir", models.CharField(max_length=500)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created_at", "-id"],
            },
        ),
    ]
