"Tests for Delaunay and alpha ingestion of point clouds."

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from numpy.typing import NDArray

from cobordia import fixtures, oracle
from cobordia.cobordism import compute_cobordisms
from cobordia.complex import Block, Label, validate
from cobordia.geometry.alpha import (
    DegeneratePosition,
    EmptySlice,
    PointCloud,
    PointCloudError,
    SliceSpec,
    alpha_filtration,
    alpha_values,
    circumsphere,
    delaunay,
    label_slices,
    strip_slab_interiors,
    vertical_bottleneck,
)
from cobordia.kernel import kernel_pairs


def _cloud(rows: list[list[float]]) -> PointCloud:
    return PointCloud(np.asarray(rows, dtype=np.float64))


def test_cloud_must_lie_in_unit_box() -> None:
    with pytest.raises(PointCloudError):
        _cloud([[0.0, 0.0], [1.5, 0.0], [0.0, 1.0]])
    with pytest.raises(PointCloudError):
        _cloud([[0.0, 0.0, 0.0, 0.0]])


def test_slice_spec_bounds() -> None:
    with pytest.raises(ValueError):
        SliceSpec(axis=1, epsilon=0.5)
    with pytest.raises(ValueError):
        SliceSpec(axis=1, epsilon=0.0)


def test_circumsphere_of_right_triangle() -> None:
    center, radius = circumsphere(np.asarray([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert np.allclose(center, [0.5, 0.5])
    assert radius == pytest.approx(math.sqrt(0.5))


def test_unit_square_corners_are_degenerate() -> None:
    cloud = _cloud([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    with pytest.raises(DegeneratePosition):
        delaunay(cloud)


def test_coincident_points_are_degenerate() -> None:
    cloud = _cloud([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(DegeneratePosition):
        delaunay(cloud)


def test_delaunay_with_interior_point() -> None:
    cloud = _cloud([[0.0, 0.0], [1.0, 0.0], [0.5, 0.8], [0.5, 0.3]])
    simplices = delaunay(cloud)
    assert len([s for s in simplices if len(s) == 3]) == 3
    assert len([s for s in simplices if len(s) == 2]) == 6
    assert len(simplices) == 13


def test_obtuse_edge_takes_triangle_value() -> None:
    cloud = _cloud([[0.0, 0.0], [1.0, 0.0], [0.5, 0.1]])
    values = alpha_values(delaunay(cloud), cloud)
    assert values[(0, 1, 2)] == pytest.approx(1.3)
    assert values[(0, 1)] == pytest.approx(1.3)
    assert values[(0, 2)] == pytest.approx(math.sqrt(0.26) / 2)
    assert values[(0,)] == 0.0


def test_alpha_filtration_is_valid_once_labeled() -> None:
    cloud = _cloud([[0.1, 0.05], [0.9, 0.1], [0.2, 0.95], [0.8, 0.9], [0.55, 0.5]])
    complex_ = alpha_filtration(delaunay(cloud), cloud)
    assert [cell.id for cell in complex_.cells] == list(range(len(complex_)))
    assert all(cell.label is Label.INTERIOR for cell in complex_.cells)
    labeled = label_slices(complex_, SliceSpec(axis=1, epsilon=0.15), cloud)
    assert validate(labeled).ok
    assert {labeled.cell(i).label for i in range(5)} == {Label.A, Label.B, Label.INTERIOR}


def test_empty_slab() -> None:
    cloud = _cloud([[0.1, 0.4], [0.9, 0.45], [0.5, 0.6]])
    complex_ = alpha_filtration(delaunay(cloud), cloud)
    with pytest.raises(EmptySlice):
        label_slices(complex_, SliceSpec(axis=1, epsilon=0.1), cloud)


def test_stripping_reopens_capped_cylinder() -> None:
    capped = fixtures.cylinder_with_top_triangle()
    assert oracle.cok_phi_dims(capped, len(capped) - 1)[1] == 0
    stripped = strip_slab_interiors(capped, dim=2)
    assert len(stripped) == len(capped) - 1
    assert oracle.cok_phi_dims(stripped, len(stripped) - 1)[1] == 1


def test_stripping_without_slab_cells_is_identity() -> None:
    complex_ = fixtures.cylinder()
    assert strip_slab_interiors(complex_, dim=2) is complex_


@pytest.mark.parametrize("seed", range(40))
def test_stripping_never_shrinks_degree_one_cokernel(seed: int) -> None:
    complex_ = fixtures.random_labeled_complex(seed)
    stripped = strip_slab_interiors(complex_, dim=2)
    before = oracle.cok_phi_dims(complex_, len(complex_) - 1).get(1, 0)
    after = oracle.cok_phi_dims(stripped, len(stripped) - 1).get(1, 0)
    assert after >= before


def test_lattice_channel_bottleneck() -> None:
    cloud = fixtures.cylinder_lattice_cloud(seed=0)
    bottleneck = vertical_bottleneck(cloud, axis=2, center=(0.5, 0.5), radius=0.15)
    assert 0.1 < bottleneck < 0.17


def test_lattice_tunnel_dies_at_channel_radius() -> None:
    cloud = fixtures.cylinder_lattice_cloud(seed=0)
    unlabeled = alpha_filtration(delaunay(cloud), cloud)
    complex_ = label_slices(unlabeled, SliceSpec(axis=2, epsilon=0.1), cloud)
    result = compute_cobordisms(
        {block: kernel_pairs(complex_, block) for block in Block}, degrees=[1]
    )
    bars = result.bars_in_degree(1)
    assert len(bars) == 1
    tunnel = bars[0]
    assert not tunnel.is_infinite
    assert tunnel.persistence > 0.02
    bottleneck = vertical_bottleneck(cloud, axis=2, center=(0.5, 0.5), radius=0.15)
    assert tunnel.death_time == pytest.approx(bottleneck, abs=0.05)


def _random_cloud_3d(seed: int) -> PointCloud:
    rng = np.random.default_rng(seed)
    return PointCloud(rng.uniform(0.25, 0.75, size=(20, 3)))


def _rotation() -> NDArray[np.float64]:
    a, b = 0.7, 0.3
    about_z = np.array([[np.cos(a), -np.sin(a), 0.0], [np.sin(a), np.cos(a), 0.0], [0, 0, 1]])
    about_x = np.array([[1, 0.0, 0.0], [0.0, np.cos(b), -np.sin(b)], [0.0, np.sin(b), np.cos(b)]])
    return about_z @ about_x


@pytest.mark.parametrize("seed", range(3))
def test_delaunay_3d_is_a_ball(seed: int) -> None:
    simplices = delaunay(_random_cloud_3d(seed))
    euler = sum((-1) ** (len(simplex) - 1) for simplex in simplices)
    assert euler == 1
    tetrahedra = [simplex for simplex in simplices if len(simplex) == 4]
    assert tetrahedra
    for triangle in (simplex for simplex in simplices if len(simplex) == 3):
        containing = [tet for tet in tetrahedra if set(triangle) <= set(tet)]
        assert 1 <= len(containing) <= 2


@pytest.mark.parametrize("seed", range(3))
def test_alpha_values_grow_along_faces(seed: int) -> None:
    cloud = _random_cloud_3d(seed)
    simplices = delaunay(cloud)
    values = alpha_values(simplices, cloud)
    for simplex in simplices:
        for face in itertools.combinations(simplex, len(simplex) - 1):
            if face:
                assert values[face] <= values[simplex] + 1e-12


@pytest.mark.parametrize("seed", range(3))
def test_alpha_values_under_rigid_motion_and_scaling(seed: int) -> None:
    cloud = _random_cloud_3d(seed)
    values = alpha_values(delaunay(cloud), cloud)
    center = np.full(3, 0.5)

    rotated = PointCloud((cloud.points - center) @ _rotation().T + center)
    rotated_values = alpha_values(delaunay(rotated), rotated)
    assert rotated_values.keys() == values.keys()
    for simplex, value in values.items():
        assert rotated_values[simplex] == pytest.approx(value, rel=1e-9, abs=1e-12)

    scaled = PointCloud((cloud.points - center) * 0.5 + center)
    scaled_values = alpha_values(delaunay(scaled), scaled)
    assert scaled_values.keys() == values.keys()
    for simplex, value in values.items():
        assert scaled_values[simplex] == pytest.approx(value / 2, rel=1e-9, abs=1e-12)
