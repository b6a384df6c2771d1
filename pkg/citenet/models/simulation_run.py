from django.db import models


class SimulationRun(models.Model):
    """
    One output set written by a management command (one seed of one scenario)
    The CSV files on disk are the results; this row only indexes them
    """

    COMMAND_CHOICES = [
        ("simulate", "Simulate"),
        ("analyze", "Analyze"),
        ("scenarios", "Scenarios"),
    ]

    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    scenario = models.CharField(max_length=100)
    seed = models.PositiveIntegerField(null=True, blank=True)
    config_hash = models.CharField(max_length=64, db_index=True)
    package_version = models.CharField(max_length=20)

    n_nodes = models.PositiveIntegerField()
    n_links = models.PositiveIntegerField()
    clustering = models.FloatField(null=True, blank=True)
    delta_minus = models.FloatField(null=True, blank=True)
    delta_plus = models.FloatField(null=True, blank=True)

    wall_time = models.FloatField(help_text="Seconds")
    output_dir = models.CharField(max_length=500)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at", "-id"]

    def __str__(self):
        return f"{self.command} {self.scenario} seed={self.seed}"
