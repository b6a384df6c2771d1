from .simulation_run import SimulationRun

__all__ = ["SimulationRun"]
