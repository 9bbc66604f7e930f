"""Tests for statistics, timing and topology bookkeeping models."""

import time
from fractions import Fraction

import pytest

from mattopo.models.stats import PipelineStats, RoundStats, StageTimer
from mattopo.models.topology import (
    Dimension,
    ElementStats,
    FractionalEuler,
    RestrictedElements,
    TopoReport,
    TopoViolation,
    ViolationKind,
)

STATS_KEYS = {"n_tets", "n_spheres", "n_rpd_rounds", "s_topo", "s_extf", "s_intf", "s_geo", "total"}


class TestPipelineStats:
    """Test cases for run statistics."""

    def test_stats_keys(self):
        """Test that the stats JSON holds exactly the required keys."""
        stats = PipelineStats(n_tets=5, n_spheres=12, n_rpd_rounds=3)
        assert set(stats.to_dict()) == STATS_KEYS

    def test_rounds_on_request(self):
        """Test that per-round records appear only when asked for."""
        stats = PipelineStats()
        stats.rounds.append(RoundStats(index=1, inserted={"topology": 2}))
        data = stats.to_dict(include_rounds=True)
        assert data["rounds"][0]["inserted"] == {"topology": 2}
        assert "rounds" not in stats.to_dict()

    def test_round_total(self):
        """Test summing insertions over stages."""
        record = RoundStats(index=1, inserted={"topology": 2, "geometry": 5})
        assert record.total_inserted == 7

    def test_stage_timer(self):
        """Test that stage times accumulate."""
        stats = PipelineStats()
        timer = StageTimer(stats)
        with timer.stage("s_topo"):
            time.sleep(0.01)
        with timer.stage("s_topo"):
            time.sleep(0.01)
        total = timer.finish()
        assert stats.timings["s_topo"] >= 0.02
        assert total >= stats.timings["s_topo"]
        assert stats.timings["s_geo"] == 0.0


class TestFractionalEuler:
    """Test cases for fractional Euler payloads."""

    def test_signed_by_dimension(self):
        """Test that odd dimensions count negatively."""
        assert FractionalEuler(Fraction(1, 2), Dimension.EDGE).signed == Fraction(-1, 2)
        assert FractionalEuler(Fraction(1, 3), Dimension.FACE).signed == Fraction(1, 3)

    def test_coerces_to_fraction(self):
        """Test exact coercion of integer payloads."""
        assert FractionalEuler(1, Dimension.VERTEX).value == Fraction(1)

    def test_cell_payload_integral(self):
        """Test that cells carry whole payloads."""
        with pytest.raises(ValueError, match="integral"):
            FractionalEuler(Fraction(1, 2), Dimension.CELL)

    def test_negative_payload(self):
        """Test that payload shares are unsigned."""
        with pytest.raises(ValueError, match="unsigned"):
            FractionalEuler(Fraction(-1), Dimension.VERTEX)


class TestRestrictedElements:
    """Test cases for per-sphere aggregates."""

    def test_signed_total(self):
        """Test the inclusion-exclusion share of one sphere."""
        elements = RestrictedElements(sphere=0, rpc_euler=Fraction(1), rpc_cc=1)
        elements.rpf[1] = ElementStats(euler=Fraction(1), cc=1)
        elements.rpe[(1, 2)] = ElementStats(euler=Fraction(1), cc=1)
        elements.rpv[(1, 2, 3)] = Fraction(1)
        expected = Fraction(1) - Fraction(1, 2) + Fraction(1, 3) - Fraction(1, 4)
        assert elements.signed_total() == expected
        assert not elements.empty

    def test_report_serialization(self):
        """Test TopoReport to_dict."""
        report = TopoReport(round_index=2)
        assert report.clean
        report.violations.append(TopoViolation(3, "rpc", ViolationKind.EULER, value=Fraction(0)))
        data = report.to_dict()
        assert data["round"] == 2
        assert data["violations"][0]["kind"] == "Euler!=1"
        assert data["violations"][0]["value"] == "0"
