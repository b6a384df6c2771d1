from django.contrib import admin

from .models import SimulationRun


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    """
    Simulation run admin configuration
    """

    list_display = (
        "command",
        "scenario",
        "seed",
        "n_nodes",
        "n_links",
        "delta_minus",
        "delta_plus",
        "wall_time",
        "created_at",
    )
    list_filter = ("command", "scenario", "created_at")
    search_fields = ("scenario", "config_hash", "output_dir")
    readonly_fields = ("created_at",)
