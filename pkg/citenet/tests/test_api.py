from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from citenet.models import SimulationRun


def make_run(**overrides):
    fields = {
        "command": "simulate",
        "scenario": "default",
        "seed": 0,
        "config_hash": "a" * 64,
        "package_version": "0.4.0",
        "n_nodes": 43192,
        "n_links": 421000,
        "clustering": 0.021,
        "delta_minus": 8.0,
        "delta_plus": 45.0,
        "wall_time": 12.5,
        "output_dir": "/tmp/runs/default/seed-0",
    }
    fields.update(overrides)
    return SimulationRun.objects.create(**fields)


class SimulationRunApiTests(APITestCase):
    def setUp(self):
        self.first = make_run()
        self.second = make_run(seed=1, output_dir="/tmp/runs/default/seed-1")
        self.other = make_run(scenario="control", config_hash="b" * 64, seed=1)

    def test_list_newest_first(self):
        response = self.client.get(reverse("citenet:run-list"))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        ids = [row["id"] for row in response.data["results"]]
        self.assertEqual(ids, [self.other.id, self.second.id, self.first.id])

    def test_filters(self):
        url = reverse("citenet:run-list")
        self.assertEqual(self.client.get(url, {"seed": 1}).data["count"], 2)
        self.assertEqual(self.client.get(url, {"scenario": "control"}).data["count"], 1)
        response = self.client.get(url, {"config_hash": "a" * 64, "seed": 0})
        self.assertEqual([row["id"] for row in response.data["results"]], [self.first.id])

    def test_detail(self):
        response = self.client.get(reverse("citenet:run-detail", kwargs={"id": self.first.id}))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["n_nodes"], 43192)
        self.assertEqual(response.data["delta_minus"], 8.0)

    def test_missing_run(self):
        response = self.client.get(reverse("citenet:run-detail", kwargs={"id": 9999}))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)

    def test_read_only(self):
        response = self.client.post(reverse("citenet:run-list"), {"scenario": "x"})
        self.assertEqual(response.status_code, status.HTTP_405_METHOD_NOT_ALLOWED)
