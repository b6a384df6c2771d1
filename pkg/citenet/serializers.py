from django.conf import settings
from rest_framework import serializers

from .core.growth_schedule import Target
from .models import SimulationRun


class YearRangeMixin:
    """
    Checks `year` against context["year_range"]; the settings range by default,
    None to accept any integer (simulated cohorts are period indices)
    """

    def validate_year(self, value):
        year_range = self.context.get("year_range", settings.CITENET["YEAR_RANGE"])
        if year_range is not None:
            low, high = year_range
            if not low <= value <= high:
                raise serializers.ValidationError(f"year {value} outside [{low}, {high}]")
        return value


class PublicationRecordSerializer(YearRangeMixin, serializers.Serializer):
    """
    One line of a publications JSONL file: {"id": ..., "year": ..., "refs": [...]}
    """

    id = serializers.CharField(allow_blank=False, trim_whitespace=False)
    year = serializers.IntegerField()
    refs = serializers.ListField(child=serializers.CharField(), default=list)

    def validate_refs(self, value):
        if len(set(value)) != len(value):
            raise serializers.ValidationError("reference list contains duplicates")
        return value


class CitedPublicationSerializer(YearRangeMixin, serializers.Serializer):
    id = serializers.CharField()
    year = serializers.IntegerField()
    cites = serializers.DictField(
        child=serializers.IntegerField(min_value=0), default=dict
    )

    def validate(self, data):
        cites = {}
        for key, count in data["cites"].items():
            try:
                year = int(key)
            except (TypeError, ValueError):
                raise serializers.ValidationError({"cites": f"'{key}' is not a year"})
            if year < data["year"]:
                raise serializers.ValidationError(
                    {"cites": f"citations in {year} precede publication in {data['year']}"}
                )
            cites[year] = count
        data["cites"] = cites
        return data


class CareerSerializer(serializers.Serializer):
    """
    One researcher per line: {"researcher": ..., "pubs": [{"id", "year", "cites"}]}
    """

    researcher = serializers.CharField()
    pubs = CitedPublicationSerializer(many=True, allow_empty=False)


class PerturbationSerializer(serializers.Serializer):
    t_star = serializers.IntegerField(min_value=1)
    target = serializers.ChoiceField(choices=[target.value for target in Target])
    value = serializers.FloatField()

    def validate(self, data):
        if data["target"] == Target.BETA.value and not 0 <= data["value"] < 1:
            raise serializers.ValidationError({"value": "beta must lie in [0, 1)"})
        return data


class GrowthBlockSerializer(serializers.Serializer):
    n0 = serializers.IntegerField(min_value=1, default=10)
    r0 = serializers.FloatField(default=1.0)
    g_n = serializers.FloatField(default=0.033)
    g_r = serializers.FloatField(default=0.018)
    T = serializers.IntegerField(min_value=1, default=150)
    perturb = PerturbationSerializer(many=True, required=False, default=list)

    def validate_r0(self, value):
        if not value > 0:
            raise serializers.ValidationError("r0 must be positive")
        return value

    def validate(self, data):
        for event in data.get("perturb", []):
            if event["t_star"] > data["T"]:
                raise serializers.ValidationError(
                    {"perturb": f"t_star={event['t_star']} exceeds T={data['T']}"}
                )
        return data


class ModelBlockSerializer(serializers.Serializer):
    c_cross = serializers.FloatField(default=7.0)
    alpha = serializers.FloatField(min_value=0, default=5.0)
    beta = serializers.FloatField(min_value=0, default=0.2)

    def validate_c_cross(self, value):
        if not value > 0:
            raise serializers.ValidationError("c_cross must be positive")
        return value

    def validate_beta(self, value):
        if not value < 1:
            raise serializers.ValidationError("beta must be strictly less than 1")
        return value


class AnalysisBlockSerializer(serializers.Serializer):
    window = serializers.IntegerField(min_value=1)
    percentiles = serializers.ListField(
        child=serializers.FloatField(min_value=0, max_value=1), allow_empty=False
    )
    thresholds = serializers.ListField(child=serializers.IntegerField(min_value=0))
    top_q = serializers.FloatField(min_value=0, max_value=1)
    snapshots = serializers.ListField(child=serializers.IntegerField(min_value=0))
    pooling = serializers.IntegerField(min_value=1)
    deltas = serializers.ListField(child=serializers.IntegerField(min_value=0))
    tau = serializers.IntegerField(min_value=0, allow_null=True, required=False)
    crossing_z = serializers.FloatField(min_value=0, default=1.0)

    def validate_percentiles(self, value):
        if any(not 0 < q < 1 for q in value):
            raise serializers.ValidationError("percentiles must lie strictly inside (0, 1)")
        return sorted(set(value))

    def validate_top_q(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("top_q must lie strictly inside (0, 1)")
        return value


class RunBlockSerializer(serializers.Serializer):
    name = serializers.SlugField(default="default")
    seeds = serializers.ListField(
        child=serializers.IntegerField(min_value=0), allow_empty=False, default=[0]
    )
    workers = serializers.IntegerField(min_value=1, default=1)


class ScenarioConfigSerializer(serializers.Serializer):
    """
    A whole scenario file; every block is validated before any run starts
    """

    growth = GrowthBlockSerializer()
    model = ModelBlockSerializer()
    analysis = AnalysisBlockSerializer()
    run = RunBlockSerializer()

    def validate(self, data):
        T = data["growth"]["T"]
        analysis = data["analysis"]
        late = [t for t in analysis["snapshots"] if t > T]
        if late:
            raise serializers.ValidationError({"analysis": {"snapshots": f"{late} exceed T={T}"}})
        early = [t for t in analysis["snapshots"] if t - analysis["pooling"] + 1 < 1]
        if early:
            raise serializers.ValidationError(
                {"analysis": {"snapshots": f"{early} pool citing periods before t=1"}}
            )
        if analysis.get("tau") is not None and analysis["tau"] > T:
            raise serializers.ValidationError({"analysis": {"tau": f"exceeds T={T}"}})
        return data


class SimulationRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = SimulationRun
        fields = [
            "id",
            "command",
            "scenario",
            "seed",
            "config_hash",
            "package_version",
            "n_nodes",
            "n_links",
            "clustering",
            "delta_minus",
            "delta_plus",
            "wall_time",
            "output_dir",
            "created_at",
        ]
        read_only_fields = fields


def flatten_errors(errors, prefix=""):
    """DRF error structures as 'field: message' strings, nested keys joined by dots."""
    if isinstance(errors, dict):
        for key, value in errors.items():
            name = "" if key == "non_field_errors" else str(key)
            yield from flatten_errors(value, f"{prefix}.{name}" if prefix and name else prefix or name)
    elif isinstance(errors, list):
        for index, value in enumerate(errors):
            if isinstance(value, (dict, list)):
                yield from flatten_errors(value, f"{prefix}[{index}]")
            else:
                yield f"{prefix}: {value}" if prefix else str(value)
    else:
        yield f"{prefix}: {errors}" if prefix else str(errors)
