import random

import pytest

from chenciner.classify import (
    TABLE_ROWS, classify_alpha_point, diagram_for, diagram_raster, diagram_select, region_classify,
)
from chenciner.normal_form import GenericityError

ALL_ROWS = [((l0, d, b1, b2v), region)
            for (l0, d, b1, b2), region in TABLE_ROWS
            for b2v in ((-1, 0, 1) if b2 is None else (b2,))]


def _values(signs, scale=1.0):
    l0, d, b1, b2 = signs
    return l0 * scale, d * 1e-3 * scale, b1 * 1e-3 * scale, b2 * 1e-3 * scale


def test_table_has_18_rows():
    assert len(TABLE_ROWS) == 18


@pytest.mark.parametrize("signs, region", ALL_ROWS)
def test_every_row(signs, region):
    assert region_classify(*_values(signs)).region == region


@pytest.mark.parametrize("signs, region", ALL_ROWS)
def test_scaling_invariance(signs, region):
    for scale in (10.0, 0.1):
        assert region_classify(*_values(signs, scale)).region == region


def test_named_examples():
    assert region_classify(1, 1e-3, -1e-3, 0).region == 1
    assert region_classify(-1, 0, 0, 0).region == 4
    assert region_classify(1, 1e-3, 1e-3, -1e-3).region == 8
    assert region_classify(-1, 1e-3, -1e-3, 1e-3).region == 7
    assert region_classify(1, 0, 1e-3, -1e-3).region == 6
    assert region_classify(-1, 0, -1e-3, 1e-3).region == 5


def test_unlisted_pattern_is_unclassified():
    lab = region_classify(-1, 0, 0, 1e-3)
    assert lab.region is None and str(lab) == "unclassified"


def test_zero_l0_rejected():
    with pytest.raises(GenericityError):
        region_classify(0.0, 1, 1, 1)


def test_delta_tol_separate_band():
    assert region_classify(1, 7e-7, 1e-3, -1e-3).region == 8
    assert region_classify(1, 7e-7, 1e-3, -1e-3, delta_tol=1e-5).region == 6


def test_diagram_select():
    assert diagram_select(1, -5, 1).diagram == "D3"
    assert diagram_select(-1, -1, 1).diagram == "D1"
    assert diagram_select(-1, 1, -1).diagram == "D2"
    assert diagram_select(1, 1, 1).diagram == "D4"
    for bad in ((0, 1, 1), (1, 0, 1), (1, 1, 0)):
        with pytest.raises(GenericityError):
            diagram_select(*bad)


def test_diagram_for_example(example_t):
    lab = diagram_for(example_t)
    assert lab.diagram == "D3" and lab.c1d1_sign == 1


@pytest.mark.parametrize("alpha, region", [
    ((-0.017, 0.015), 1), ((-0.015, 0.015), 2), ((-0.5, 0.05), 8)])
def test_alpha_points(example, example_t, alpha, region):
    assert classify_alpha_point(example, example_t, alpha).label.region == region


def test_delta_zero_point(example, example_t):
    r = classify_alpha_point(example, example_t, (-0.015719, 0.015), delta_tol=1e-5)
    assert r.label.region == 6


def test_alpha_and_hat_routes_agree(example, example_t):
    rng = random.Random(5)
    tol = 1e-9
    checked = 0
    while checked < 100:
        alpha = (rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02))
        r = classify_alpha_point(example, example_t, alpha, tol)
        margins = (abs(r.delta), abs(r.beta1), abs(r.beta2), abs(r.hat_beta1), abs(r.hat_beta2))
        if min(margins) <= 10 * tol or not r.label.classified:
            continue
        assert r.hat_label.region == r.label.region, alpha
        checked += 1


def test_routes_agree_at_published_points_except_r8(example, example_t):
    for alpha in ((-0.017, 0.015), (-0.015, 0.015)):
        r = classify_alpha_point(example, example_t, alpha)
        assert r.hat_label.region == r.label.region
    r = classify_alpha_point(example, example_t, (-0.015719, 0.015), delta_tol=1e-5)
    assert r.hat_label.region == r.label.region


def test_raster_d3_window(example_t):
    ras = diagram_raster(example_t, ((-0.01, 0.01), (-0.1, 0.1)), (41, 41))
    assert ras.labels_present() == {1, 2, 6, 8}
    assert ras.regions.shape == (41, 41)
    assert ras.curves is not None


def test_raster_negative_mu1_is_region2(example_t):
    ras = diagram_raster(example_t, ((-0.01, -0.001), (-0.05, 0.05)), (11, 11))
    assert ras.labels_present() == {2}


def test_raster_single_point(example_t):
    ras = diagram_raster(example_t, ((0.001, 0.001), (0.01, 0.01)), (1, 1))
    assert ras.regions.shape == (1, 1) and len(list(ras.rows())) == 1
