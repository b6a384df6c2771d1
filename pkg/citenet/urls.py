from django.urls import path

from . import views

app_name = "citenet"

urlpatterns = [
    path("runs/", views.SimulationRunListView.as_view(), name="run-list"),
    path("runs/<int:id>/", views.SimulationRunDetailView.as_view(), name="run-detail"),
]
