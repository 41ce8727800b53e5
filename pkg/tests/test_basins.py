import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpm import frames
from tpm.basins import (
    LABEL_NONE,
    LABEL_OTHER,
    LABEL_OUTSIDE,
    SectorReport,
    _boundary_angles,
    alpha_orbit,
    alpha_step,
    grid_sidecar,
    grid_to_ppm,
    render_basins,
    sector_check,
)
from tpm.errors import InvalidArgs
from tpm.experiments import allones_tensor
from tpm.power import run, run_batch
from tpm.tensor import contract_vec

MB = frames.mercedes_benz()


class TestAlphaStep:
    def test_d4_identity(self):
        assert alpha_step(0.3, 4) == pytest.approx(0.3, abs=1e-15)

    def test_symmetric_fixed_point(self):
        for d in range(3, 12):
            assert alpha_step(0.5, d) == pytest.approx(0.5, abs=1e-15)

    def test_d6_reference_value(self):
        # frozen arithmetic of the recursion at alpha = 0.3:
        # (0.3^5 - 0.7^5/2 + 1/2) / (1 + 0.3^5/2 + 0.7^5/2)
        want = (0.3**5 - 0.5 * 0.7**5 + 0.5) / (1 + 0.5 * 0.3**5 + 0.5 * 0.7**5)
        assert want == pytest.approx(0.418395 / 1.08525, abs=1e-6)
        assert alpha_step(0.3, 6) == pytest.approx(want, abs=1e-15)
        assert alpha_step(0.3, 6) == pytest.approx(0.385528, abs=1e-6)

    def test_rejects_low_order(self):
        with pytest.raises(InvalidArgs):
            alpha_step(0.3, 2)

    @settings(max_examples=60, deadline=None)
    @given(
        a=st.floats(1e-6, 1.0 - 1e-6, exclude_min=False),
        d=st.sampled_from([6, 8, 10, 12]),
    )
    def test_contraction_even_order(self, a, d):
        if abs(a - 0.5) < 1e-12:
            return
        assert abs(alpha_step(a, d) - 0.5) < abs(a - 0.5)


class TestAlphaOrbit:
    def test_d6_reaches_half(self):
        orbit = alpha_orbit(0.1, 6, 50)
        assert abs(orbit[-1] - 0.5) <= 1e-12
        assert len(orbit) == 51 and orbit[0] == 0.1

    def test_d8_from_above(self):
        assert abs(alpha_orbit(0.9, 8, 50)[-1] - 0.5) <= 1e-12

    def test_d4_constant(self):
        orbit = alpha_orbit(0.25, 4, 10)
        assert all(a == 0.25 for a in orbit)

    def test_monotone_contraction(self):
        orbit = alpha_orbit(0.1, 6, 30)
        gaps = [abs(a - 0.5) for a in orbit]
        for a, b in zip(gaps, gaps[1:]):
            assert b < a or b == 0.0

    def test_domain_check(self):
        with pytest.raises(InvalidArgs):
            alpha_orbit(0.0, 6, 5)
        with pytest.raises(InvalidArgs):
            alpha_orbit(1.0, 6, 5)


class TestRatioConsistency:
    @pytest.mark.parametrize("d", [4, 6, 8])
    def test_recursion_matches_power_step(self, d):
        # alpha_k = -<x, v2>/<x, v1>; one power step then re-extraction must
        # equal the closed-form recursion whenever <x, v1> != 0
        T = allones_tensor(MB, d)
        v1, v2 = MB.V[:, 0], MB.V[:, 1]
        rng = np.random.default_rng(d)
        checked = 0
        while checked < 100:
            x = rng.normal(size=2)
            x /= np.linalg.norm(x)
            c = float(x @ v1)
            if abs(c) < 1e-2:
                continue
            a = -float(x @ v2) / c
            y = contract_vec(T, x)
            c2 = float(y @ v1)
            if abs(c2) < 1e-8:
                continue
            a_next = -float(y @ v2) / c2
            assert abs(a_next - alpha_step(a, d)) <= 1e-12
            checked += 1


class TestRender:
    def test_labels_only_inside_disk(self):
        T = allones_tensor(MB, 6)
        grid = render_basins(T, MB, 64)
        res = 64
        js = np.arange(res)
        xs = -1.0 + (2.0 * js + 1.0) / res
        ys = 1.0 - (2.0 * js + 1.0) / res
        XX, YY = np.meshgrid(xs, ys)
        outside = XX**2 + YY**2 > 1.0
        assert np.all(grid.labels[outside] == LABEL_OUTSIDE)
        assert np.all(grid.labels[~outside] != LABEL_OUTSIDE)

    def test_d6_sector_structure(self):
        T = allones_tensor(MB, 6)
        res = 64
        grid = render_basins(T, MB, res)
        js = np.arange(res)
        xs = -1.0 + (2.0 * js + 1.0) / res
        ys = 1.0 - (2.0 * js + 1.0) / res
        XX, YY = np.meshgrid(xs, ys)
        pix = 2.0 / res
        bounds = _boundary_angles(MB)
        for i in range(res):
            for j in range(res):
                lab = grid.labels[i, j]
                if lab <= 0:
                    continue
                c = np.array([XX[i, j], YY[i, j]])
                theta = math.atan2(c[1], c[0]) % (2 * math.pi)
                dist_to_boundary = np.min(
                    np.abs(np.sin(theta - bounds))
                ) * np.linalg.norm(c)
                if dist_to_boundary <= 2 * pix:
                    continue
                want = 1 + int(np.argmax(np.abs(MB.V.T @ c)))
                assert lab == want

    def test_d4_everything_other(self):
        T = allones_tensor(MB, 4)
        grid = render_basins(T, MB, 32)
        inside = grid.labels != LABEL_OUTSIDE
        assert np.all(grid.labels[inside] == LABEL_OTHER)
        assert np.all(grid.iterations[inside] == 1)

    def test_d5_fractal_slice(self):
        T = allones_tensor(MB, 5)
        grid = render_basins(T, MB, 32, max_iter=200)
        inside = grid.labels != LABEL_OUTSIDE
        labs = set(np.unique(grid.labels[inside]).tolist())
        assert {1, 2, 3} <= labs
        assert labs <= {1, 2, 3, LABEL_NONE, LABEL_OTHER}
        labeled = np.isin(grid.labels, [1, 2, 3]).sum()
        assert labeled / inside.sum() > 0.9

    def test_rotation_invariance(self):
        # rotating frame and sample points together permutes nothing
        d = 6
        theta = 0.7
        c, s = math.cos(theta), math.sin(theta)
        R = np.array([[c, -s], [s, c]])
        T = allones_tensor(MB, d)
        FR = frames.validate_frame(R @ MB.V)
        TR = allones_tensor(FR, d)
        rng = np.random.default_rng(4)
        pts = rng.normal(size=(200, 2))
        _, _, conv1, lidx1, _ = run_batch(T, pts, 200, 1e-10, frame=MB)
        _, _, conv2, lidx2, _ = run_batch(TR, pts @ R.T, 200, 1e-10, frame=FR)
        assert np.array_equal(conv1, conv2)
        assert np.array_equal(lidx1, lidx2)

    def test_dihedral_symmetry(self):
        # rotation by 120 degrees permutes the basin labels 1->3->2->1
        T = allones_tensor(MB, 6)
        R = np.array(
            [
                [math.cos(2 * math.pi / 3), -math.sin(2 * math.pi / 3)],
                [math.sin(2 * math.pi / 3), math.cos(2 * math.pi / 3)],
            ]
        )
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(200, 2))
        _, _, _, lidx1, _ = run_batch(T, pts, 200, 1e-10, frame=MB)
        _, _, _, lidx2, _ = run_batch(T, pts @ R.T, 200, 1e-10, frame=MB)
        perm = {0: 2, 1: 0, 2: 1, -1: -1}
        agree = sum(
            1 for a, b in zip(lidx1, lidx2) if a >= 0 and b == perm[int(a)]
        )
        counted = sum(1 for a in lidx1 if a >= 0)
        assert agree >= 0.99 * counted

    def test_batch_matches_scalar_on_pixels(self):
        T = allones_tensor(MB, 6)
        grid = render_basins(T, MB, 32)
        res = 32
        rng = np.random.default_rng(6)
        for _ in range(25):
            i, j = int(rng.integers(res)), int(rng.integers(res))
            if grid.labels[i, j] == LABEL_OUTSIDE:
                continue
            x = -1.0 + (2.0 * j + 1.0) / res
            y = 1.0 - (2.0 * i + 1.0) / res
            r = run(T, np.array([x, y]), max_iter=200, tol=1e-10, frame=MB)
            want = (
                (r.limit_index + 1)
                if r.limit_index is not None
                else (LABEL_OTHER if r.converged else LABEL_NONE)
            )
            assert grid.labels[i, j] == want

    def test_threads_do_not_change_output(self):
        T = allones_tensor(MB, 6)
        g1 = render_basins(T, MB, 48, threads=1)
        g2 = render_basins(T, MB, 48, threads=4)
        assert np.array_equal(g1.labels, g2.labels)
        assert np.array_equal(g1.iterations, g2.iterations)

    def test_resolution_floor(self):
        with pytest.raises(InvalidArgs):
            render_basins(allones_tensor(MB, 6), MB, 8)


class TestPpm:
    def test_header_and_size(self):
        T = allones_tensor(MB, 6)
        grid = render_basins(T, MB, 32)
        blob = grid_to_ppm(grid)
        assert blob.startswith(b"P6\n32 32\n255\n")
        header_len = len(b"P6\n32 32\n255\n")
        assert len(blob) == header_len + 32 * 32 * 3

    def test_sidecar_fields(self):
        T = allones_tensor(MB, 6)
        grid = render_basins(T, MB, 32)
        doc = grid_sidecar(grid)
        assert doc["resolution"] == 32 and doc["d"] == 6
        assert doc["colors"]["v1"] == "#0000ff"
        assert doc["colors"]["v2"] == "#ff0000"
        assert doc["colors"]["v3"] == "#00c800"
        assert set(doc["iterations"]) == {"mean", "min", "max"}


class TestSectorCheck:
    def test_boundary_angles_mb(self):
        bounds = sorted(np.degrees(_boundary_angles(MB)))
        assert np.allclose(bounds, [0, 60, 120, 180, 240, 300], atol=1e-9)

    @pytest.mark.parametrize("d", [6, 8])
    def test_passes(self, d):
        T = allones_tensor(MB, d)
        rep = sector_check(T, MB, samples=300, seed=3)
        assert isinstance(rep, SectorReport)
        assert rep.fails == 0 and rep.passes + rep.skipped == 300

    def test_skip_radius_controls_exclusion(self):
        T = allones_tensor(MB, 6)
        rep = sector_check(T, MB, samples=50, seed=3, skip_radius=math.pi)
        assert rep.skipped == 50 and rep.passes == 0 and rep.fails == 0
