"""Tests for the medial sphere model."""

import numpy as np
import pytest

from mattopo.models.sphere import MedialSphere, SphereKind


class TestMedialSphere:
    """Test cases for MedialSphere validation."""

    def test_t2_sphere(self):
        """Test creating a regular interior sphere."""
        sphere = MedialSphere(id=0, center=[0.5, 0.5, 0.5], radius=0.5)
        assert sphere.kind is SphereKind.T2
        assert sphere.weight == pytest.approx(0.25)
        assert sphere.is_active
        assert sphere.center.shape == (3,)

    def test_kind_from_string(self):
        """Test that the kind may be given by value."""
        sphere = MedialSphere(id=1, center=[0, 0, 0], radius=0.0, kind="corner", n_tangent=0)
        assert sphere.kind is SphereKind.CORNER
        assert sphere.kind.is_feature

    def test_negative_radius(self):
        """Test that negative radii are rejected."""
        with pytest.raises(ValueError, match="cannot be negative"):
            MedialSphere(id=0, center=[0, 0, 0], radius=-1.0)

    def test_feature_sphere_needs_zero_radius(self):
        """Test that edge and corner spheres carry no radius."""
        with pytest.raises(ValueError, match="zero radius"):
            MedialSphere(id=0, center=[0, 0, 0], radius=0.1, kind=SphereKind.FEATURE_EDGE)

    def test_interior_sphere_needs_radius(self):
        """Test that only feature spheres may be points."""
        with pytest.raises(ValueError, match="Only feature spheres"):
            MedialSphere(id=0, center=[0, 0, 0], radius=0.0)

    def test_tn_sphere_needs_three_regions(self):
        """Test the tangency count of seam spheres."""
        with pytest.raises(ValueError, match="at least 3"):
            MedialSphere(id=0, center=[0, 0, 0], radius=1.0, kind=SphereKind.TN, n_tangent=2)

    def test_non_finite_center(self):
        """Test that NaN coordinates are rejected."""
        with pytest.raises(ValueError, match="finite"):
            MedialSphere(id=0, center=[np.nan, 0, 0], radius=1.0)

    def test_to_dict(self):
        """Test serialization."""
        data = MedialSphere(id=4, center=[1, 2, 3], radius=0.5).to_dict()
        assert data["id"] == 4
        assert data["center"] == [1.0, 2.0, 3.0]
        assert data["kind"] == "T2"
        assert data["deleted"] is False
