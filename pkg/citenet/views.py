from rest_framework import generics

from .models import SimulationRun
from .serializers import SimulationRunSerializer


class SimulationRunListView(generics.ListAPIView):
    """
    GET /api/runs/ - List recorded runs, newest first
    """

    queryset = SimulationRun.objects.all()
    serializer_class = SimulationRunSerializer

    def get_queryset(self):
        """Filter by query parameters if provided"""
        queryset = super().get_queryset()

        seed = self.request.query_params.get("seed", None)
        if seed is not None and seed.isdigit():
            queryset = queryset.filter(seed=int(seed))

        scenario = self.request.query_params.get("scenario", None)
        if scenario:
            queryset = queryset.filter(scenario=scenario)

        config_hash = self.request.query_params.get("config_hash", None)
        if config_hash:
            queryset = queryset.filter(config_hash=config_hash)

        return queryset


class SimulationRunDetailView(generics.RetrieveAPIView):
    """
    GET /api/runs/{id}/ - Retrieve one recorded run
    """

    queryset = SimulationRun.objects.all()
    serializer_class = SimulationRunSerializer
    lookup_field = "id"
