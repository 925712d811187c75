import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from seagull.datagen import (
    NoiseMode,
    NoiseSpec,
    TargetKind,
    TransformKind,
    add_noise,
    apply_transform,
    join_points,
    load_csv,
    make_dataset,
    sample_cube,
    sample_sphere_triple,
    save_csv,
    solid_angle,
    split_points,
    target_values,
    triangle_area,
)

cube_rows = arrays(np.float64, 9, elements=st.floats(-2, 2))


def cross_area(points):
    u, v, w = split_points(points)
    return 0.5 * np.linalg.norm(np.cross(v - u, w - u), axis=-1)


def lhuilier(points):
    """Spherical excess from the three arc lengths."""
    u, v, w = split_points(points)
    arc = lambda p, q: np.arccos(np.clip(np.einsum("...i,...i->...", p, q), -1, 1))
    a, b, c = arc(v, w), arc(w, u), arc(u, v)
    s = (a + b + c) / 2
    t = np.tan(s / 2) * np.tan((s - a) / 2) * np.tan((s - b) / 2) * np.tan((s - c) / 2)
    return 4 * np.arctan(np.sqrt(np.clip(t, 0, None)))


# -- sampling -----------------------------------------------------------------


def test_cube_sampling():
    x = sample_cube(10_000, 0)
    assert x.shape == (10_000, 9)
    assert x.min() >= -2 and x.max() <= 2
    np.testing.assert_array_equal(x, sample_cube(10_000, 0))
    assert not np.array_equal(x, sample_cube(10_000, 1))


def test_sphere_sampling():
    x = sample_sphere_triple(10_000, 0)
    assert np.abs(np.linalg.norm(x.reshape(-1, 3, 3), axis=2) - 1).max() < 1e-12
    # each coordinate of a uniform point on S^2 has mean 0 and variance 1/3
    assert np.abs(x.mean(axis=0)).max() < 0.03
    assert np.abs(x.var(axis=0) - 1 / 3).max() < 0.02


def test_sampling_rejects_empty():
    with pytest.raises(ValueError):
        sample_cube(0, 0)
    with pytest.raises(ValueError):
        sample_sphere_triple(0, 0)


# -- triangle area ------------------------------------------------------------


def test_triangle_area_examples():
    assert triangle_area([0, 0, 0, 1, 0, 0, 0, 1, 0]) == 0.5
    assert triangle_area([0, 0, 0, 1, 1, 1, 2, 2, 2]) == 0.0
    assert triangle_area([0, 0, 0, 0, 0, 0, 0, 0, 0]) == 0.0


def test_triangle_area_matches_cross_product():
    x = sample_cube(10_000, 11)
    assert np.abs(triangle_area(x) - cross_area(x)).max() < 1e-12


@given(p=cube_rows)
def test_triangle_area_invariant_under_vertex_permutation(p):
    u, v, w = split_points(p)
    base = triangle_area(p)
    for a, b, c in itertools.permutations((u, v, w)):
        assert abs(triangle_area(join_points(a, b, c)) - base) <= 1e-12


@given(p=cube_rows, t=arrays(np.float64, 3, elements=st.floats(-5, 5)))
def test_triangle_area_translation_invariant(p, t):
    u, v, w = split_points(p)
    assert abs(triangle_area(join_points(u + t, v + t, w + t)) - triangle_area(p)) <= 1e-11


def test_triangle_area_depends_on_more_than_the_midpoint():
    x = sample_cube(1000, 5)
    u, v, w = split_points(x)
    m = (u + v) / 2
    assert np.abs(triangle_area(x) - triangle_area(join_points(m, m, w))).mean() > 0.1


# -- solid angle --------------------------------------------------------------


def test_solid_angle_octant():
    p = [1, 0, 0, 0, 1, 0, 0, 0, 1]
    for variant in ("solid-angle", "solid-angle-standard"):
        assert solid_angle(p, variant) == pytest.approx(math.pi / 2, abs=1e-15)


def test_solid_angle_degenerate_is_zero():
    assert solid_angle([1, 0, 0, 1, 0, 0, 0, 1, 0], "solid-angle-standard") == 0.0


def test_solid_angle_standard_matches_lhuilier():
    x = sample_sphere_triple(10_000, 3)
    assert np.abs(solid_angle(x, "solid-angle-standard") - lhuilier(x)).max() < 1e-9


def test_solid_angle_variants_agree_when_denominator_nonnegative():
    x = sample_sphere_triple(10_000, 4)
    u, v, w = split_points(x)
    den = 1 + (u * v).sum(-1) + (v * w).sum(-1) + (w * u).sum(-1)
    piecewise, std = solid_angle(x), solid_angle(x, "solid-angle-standard")
    pos = den >= 0
    np.testing.assert_array_equal(piecewise[pos], std[pos])
    np.testing.assert_allclose(piecewise[~pos], std[~pos] - math.pi, atol=1e-12)
    assert (~pos).any()


def test_solid_angle_range():
    x = sample_sphere_triple(10_000, 5)
    std = solid_angle(x, "solid-angle-standard")
    assert std.min() >= 0 and std.max() < 2 * math.pi


def test_solid_angle_rejects_non_unit_vectors():
    with pytest.raises(ValueError):
        solid_angle([2, 0, 0, 0, 1, 0, 0, 0, 1])


@pytest.mark.parametrize("variant", ["solid-angle", "solid-angle-standard"])
def test_solid_angle_exchange_symmetric(variant):
    x = sample_sphere_triple(2000, 6)
    u, v, w = split_points(x)
    assert np.abs(solid_angle(x, variant) - solid_angle(join_points(v, u, w), variant)).max() < 1e-12


# -- transforms and noise -----------------------------------------------------


def test_transform_examples():
    assert apply_transform("identity", 1.5) == 1.5
    assert apply_transform("log1p", 0.0) == 0.0
    assert apply_transform("exp-div100", 0.0) == 0.01
    assert apply_transform("sin", 0.0) == 0.0
    assert apply_transform("sqrt-ratio", 1.0) == pytest.approx(math.sqrt(2))
    assert apply_transform("sqrt-ratio", 0.0) == pytest.approx(math.sqrt(3))


def test_transform_domain_errors():
    with pytest.raises(ValueError):
        apply_transform("log1p", -1.0)
    with pytest.raises(ValueError):
        apply_transform("sqrt-ratio", np.array([0.0, -2.0]))


def test_transform_formulas_are_labelled():
    assert TransformKind.LOG1P.formula == "log(1+f(x))"
    assert {t.formula for t in TransformKind} >= {"f(x)", "sin(f(x))"}


def test_noise_scale_and_mean():
    y = triangle_area(sample_cube(100_000, 1))
    noisy = add_noise(y, NoiseSpec(enabled=True, seed=2))
    resid = noisy - y
    assert abs(resid.std() / (0.05 * y.std()) - 1) < 0.05
    assert abs(resid.mean()) < 3 * 0.05 * y.std() / math.sqrt(len(y))


def test_noise_per_label_mode_scales_with_magnitude():
    y = np.array([0.0, 1.0, 100.0] * 1000)
    noisy = add_noise(y, NoiseSpec(enabled=True, mode=NoiseMode.PER_LABEL, seed=0))
    np.testing.assert_array_equal(noisy[::3], 0.0)
    assert np.std(noisy[2::3] - 100) > 10 * np.std(noisy[1::3] - 1)


def test_noise_is_seeded_and_optional():
    y = np.linspace(0, 1, 100)
    spec = NoiseSpec(enabled=True, seed=9)
    np.testing.assert_array_equal(add_noise(y, spec), add_noise(y, spec))
    np.testing.assert_array_equal(add_noise(y, NoiseSpec()), y)
    with pytest.raises(ValueError):
        NoiseSpec(relative_sigma=-0.1)


# -- datasets -----------------------------------------------------------------


def test_make_dataset_pairs_target_and_domain():
    with pytest.raises(ValueError):
        make_dataset("solid-angle", n=10, domain="cube")
    with pytest.raises(ValueError):
        make_dataset("triangle-area", n=10, domain="sphere")
    ds = make_dataset("solid-angle", n=10, seed=1)
    assert ds.provenance["domain"] == "sphere"


def test_make_dataset_is_seeded_and_labelled():
    a = make_dataset("triangle-area", "log1p", NoiseSpec(enabled=True, seed=3), n=500, seed=8)
    b = make_dataset("triangle-area", "log1p", NoiseSpec(enabled=True, seed=3), n=500, seed=8)
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert a.provenance == b.provenance
    clean = make_dataset("triangle-area", "log1p", n=500, seed=8)
    np.testing.assert_array_equal(clean.labels, np.log1p(triangle_area(clean.features)))
    np.testing.assert_allclose(clean.labels, np.log1p(cross_area(clean.features)), rtol=0, atol=1e-12)


@pytest.mark.parametrize("target", list(TargetKind))
def test_targets_are_nontrivial(target):
    x = make_dataset(target, n=1000, seed=2).features
    u, v, w = split_points(x)
    m = (u + v) / 2
    base = target_values(target, x)
    # midpoints of two unit vectors are not unit, so measure the sphere case on renormalised means
    if target.domain == "sphere":
        m = m / np.linalg.norm(m, axis=1, keepdims=True)
    assert np.abs(base - target_values(target, join_points(m, m, w))).mean() > 0.05


def test_csv_round_trip_is_exact(tmp_path):
    ds = make_dataset("solid-angle", "sin", NoiseSpec(enabled=True, seed=1), n=50, seed=4)
    save_csv(ds, tmp_path / "d.csv")
    back = load_csv(tmp_path / "d.csv")
    assert back.features.tobytes() == ds.features.tobytes()
    assert back.labels.tobytes() == ds.labels.tobytes()
    assert back.provenance == ds.provenance
    assert (tmp_path / "d.csv").read_text().splitlines()[1] == "x1,x2,x3,x4,x5,x6,x7,x8,x9,y"
