"""Acceptance checks runnable from the CLI (``logmorph selftest``).

Each criterion function returns (ok, detail).  All checks are seeded and
self-contained; the DRIVE reproduction is the only one needing external
data and is skipped unless a dataset directory is supplied.
"""

import math
from itertools import product

import numpy as np

from . import asplund, evaluate, fixtures, lip, morphology, oracle, residues, vessels
from .image import StructuringFunction, disk, gaussian_ring, half_sphere, ring

TOL = 1e-9
TOL_INV = 1e-6


def max_abs_diff(a, b):
    """Worst pointwise deviation; equal values (including equal infinities)
    count as zero, mismatched infinities as inf."""
    with np.errstate(invalid="ignore"):
        diff = np.abs(np.asarray(a) - np.asarray(b))
    return float(np.max(np.where(np.asarray(a) == np.asarray(b), 0.0, diff)))


def _random_sf(rng, box=2, lo=0.0, hi=120.0, density=0.4):
    offs = [(dy, dx)
            for dy in range(-box, box + 1) for dx in range(-box, box + 1)
            if rng.random() < density]
    if not offs:
        offs = [(0, 0)]
    return StructuringFunction(np.array(offs), rng.uniform(lo, hi, len(offs)))


def _random_image(rng, shape=(16, 16), lo=0.0, hi=255.5):
    return rng.uniform(lo, hi, shape)


def _probe_parts(theta=0.35, width=6, length=7):
    p = vessels.build_probe(theta, width, length)
    union = StructuringFunction(
        np.vstack([p.center.offsets, p.left.offsets, p.right.offsets]),
        np.concatenate([p.center.values, p.left.values, p.right.values]))
    return union, p.left, p.right


# ---------------------------------------------------------------------------

def criterion_adjunction():
    """1: exhaustive adjunction over 3x3 ternary images and 1x3 probes."""
    vals = np.array([0.0, 64.0, 128.0])
    n = 3 ** 9
    codes = (np.arange(n)[:, None] // 3 ** np.arange(8, -1, -1)[None, :]) % 3
    tall = vals[codes].reshape(-1, 3)       # rows 3j:3j+3 hold image j
    p_idx = np.arange(9)[None, :]
    f_packed = np.packbits(
        np.stack([codes.T >= c for c in range(4)], axis=1), axis=2)
    violations = 0
    for se_vals in product(vals, repeat=3):
        se = StructuringFunction(np.array([[0, -1], [0, 0], [0, 1]]),
                                 np.array(se_vals))
        delta = morphology.log_dilate(tall, se).reshape(n, 9)
        eps = morphology.log_erode(tall, se).reshape(n, 9)
        # smallest grey level an f pixel needs to dominate the dilation
        tcode = np.searchsorted(vals, delta, side="left")
        u_packed = np.packbits(
            np.stack([eps.T >= vals[c] for c in range(3)], axis=1), axis=2)
        for lo in range(0, n, 2048):
            hi = min(lo + 2048, n)
            lhs = np.bitwise_and.reduce(f_packed[p_idx, tcode[lo:hi]], axis=1)
            rhs = np.bitwise_and.reduce(u_packed[p_idx, codes[lo:hi]], axis=1)
            if not np.array_equal(lhs, rhs):
                violations += int(np.sum(np.any(lhs != rhs, axis=1)))
    return violations == 0, f"{violations} violations over 27 probes x {n}^2 image pairs"


def criterion_isomorphism():
    """2: logarithmic operators match the conjugated classical route."""
    rng = np.random.default_rng(20240202)
    worst = 0.0
    for i in range(500):
        lo = -300.0 if i % 2 else 0.0
        f = _random_image(rng, lo=lo)
        b = _random_sf(rng)
        k = int(rng.integers(0, b.size))
        worst = max(
            worst,
            max_abs_diff(morphology.log_dilate(f, b),
                         oracle.log_dilate_via_isomorphism(f, b)),
            max_abs_diff(morphology.log_erode(f, b),
                         oracle.log_erode_via_isomorphism(f, b)),
            max_abs_diff(morphology.log_rank_min(f, b, k),
                         oracle.log_rank_min_via_isomorphism(f, b, k)),
            max_abs_diff(morphology.log_rank_max(f, b, k),
                         oracle.log_rank_max_via_isomorphism(f, b, k)),
        )
    return worst <= TOL, f"max deviation {worst:.3e} over 500 images"


def criterion_duality():
    """3: erosion and dilation are dual through image negation."""
    from .image import negate_image
    rng = np.random.default_rng(20240203)
    worst = 0.0
    for _ in range(500):
        f = _random_image(rng, lo=-511.0, hi=255.0)
        b = _random_sf(rng)
        fn = negate_image(f)
        worst = max(
            worst,
            max_abs_diff(negate_image(morphology.log_dilate(fn, b)),
                         morphology.log_erode(f, b.reflect())),
            max_abs_diff(negate_image(morphology.log_erode(fn, b)),
                         morphology.log_dilate(f, b.reflect())),
        )
    return worst <= TOL, f"max deviation {worst:.3e} over 500 images"


def criterion_filter_axioms():
    """4: opening/closing are increasing, (anti-)extensive and idempotent."""
    rng = np.random.default_rng(20240204)
    worst = 0.0
    ok = True
    for _ in range(100):
        f = _random_image(rng)
        g = np.minimum(f + rng.uniform(0.0, 30.0, f.shape), 255.9)
        b = _random_sf(rng)
        go, gg = morphology.log_opening(f, b), morphology.log_opening(g, b)
        co, cg = morphology.log_closing(f, b), morphology.log_closing(g, b)
        ok &= bool(np.all(go <= gg + TOL) and np.all(co <= cg + TOL))
        ok &= bool(np.all(go <= f + TOL) and np.all(co >= f - TOL))
        worst = max(
            worst,
            max_abs_diff(morphology.log_opening(go, b), go),
            max_abs_diff(morphology.log_closing(co, b), co),
        )
    return ok and worst <= TOL, f"idempotence deviation {worst:.3e}"


def criterion_bound_preservation():
    """5: bounded dilation stays below M where classical overflows."""
    rng = np.random.default_rng(20240205)
    f = rng.uniform(250.0, 255.9, (32, 32))
    b = half_sphere(3, base=100.0, amplitude=50.0)
    bounded = morphology.log_dilate(f, b)
    classical = morphology.dilate(f, b)
    ok = bool(np.all(bounded <= 256.0) and np.max(classical) > 256.0)
    return ok, (f"log max {np.max(bounded):.6f} <= 256, "
                f"classical max {np.max(classical):.1f} > 256")


def criterion_rank_degeneracy():
    """6: k = 0 rank filters are bit-identical to erosion/dilation."""
    rng = np.random.default_rng(20240206)
    ok = True
    for _ in range(100):
        f = _random_image(rng)
        b = _random_sf(rng)
        ok &= np.array_equal(morphology.rank_min(f, b, 0),
                             morphology.erode(f, b))
        ok &= np.array_equal(morphology.rank_max(f, b, 0),
                             morphology.dilate(f, b))
        ok &= np.array_equal(morphology.log_rank_min(f, b, 0),
                             morphology.log_erode(f, b))
        ok &= np.array_equal(morphology.log_rank_max(f, b, 0),
                             morphology.log_dilate(f, b))
    return ok, "bit-identical on 100 seeded cases"


def criterion_asplund_identities():
    """7: flat-probe gradient equality, flat-zone constant, discard counts."""
    rng = np.random.default_rng(20240207)
    f = _random_image(rng, (24, 24))
    b0 = disk(2, value=30.0)
    d1 = max_abs_diff(asplund.asplund_map(f, b0),
                      asplund.lip_gradient(f, disk(2)))

    f2 = _random_image(rng, (32, 32))
    f2[8:24, 8:24] = 90.0
    b = half_sphere(2, base=5.0, amplitude=20.0)
    zone = np.zeros(f2.shape, dtype=bool)
    zone[8:24, 8:24] = True
    eroded = np.zeros_like(zone)
    for y in range(32):
        for x in range(32):
            eroded[y, x] = all(
                0 <= y + dy < 32 and 0 <= x + dx < 32 and zone[y + dy, x + dx]
                for dy, dx in b.offsets)
    expected = float(lip.lip_sub(25.0, 5.0))
    amap = asplund.asplund_map(f2, b)
    d2 = np.max(np.abs(amap[eroded] - expected)) if eroded.any() else np.inf

    counts = asplund.tolerance_counts(0.85, 21)
    ok = d1 <= TOL and d2 <= TOL and counts == (3, 2, 1)
    return ok, (f"gradient eq {d1:.2e}, flat zone {d2:.2e}, counts {counts}")


def criterion_invariance_suite():
    """8: LIP residues cancel LIP-added constants; classical ones do not."""
    rng = np.random.default_rng(20240208)
    f = rng.uniform(0.0, 255.0, (64, 64))
    probe = half_sphere(3, base=60.0, amplitude=30.0)
    gring = gaussian_ring(4, 5, ring_value=20.0, sigma=1.5, amplitude=50.0)
    ring_only = ring(4, 5, value=20.0)
    bump_b, bump_l, bump_r = _probe_parts()
    invariant_ops = {
        "extended_lip_top_hat": lambda x: residues.extended_lip_top_hat(x, probe),
        "bump_detector": lambda x: residues.bump_detector(x, bump_b, bump_l, bump_r),
        "diff_of_log_openings": lambda x: residues.diff_of_log_openings(x, gring, ring_only),
        "asplund_map": lambda x: asplund.asplund_map(x, probe),
        "asplund_map_tol": lambda x: asplund.asplund_map_tol(x, probe, 0.85),
    }
    worst = 0.0
    for c in (-200.0, -50.0, 50.0, 200.0):
        fc = lip.lip_add(f, c)
        for op in invariant_ops.values():
            worst = max(worst, max_abs_diff(op(fc), op(f)))
    classical_ops = {
        "top_hat": lambda x: residues.top_hat(x, disk(3)),
        "extended_top_hat": lambda x: residues.extended_top_hat(x, probe),
        "diff_of_openings": lambda x: residues.diff_of_openings(x, gring, ring_only),
        "classical_tol_map": lambda x: asplund.classical_tol_map(x, probe, 0.85),
    }
    fc = lip.lip_add(f, -200.0)
    weakest = min(max_abs_diff(op(fc), op(f)) for op in classical_ops.values())
    ok = worst <= TOL_INV and weakest > 1.0
    return ok, (f"invariant max dev {worst:.3e}, "
                f"classical counterexample min dev {weakest:.2f}")


def criterion_vessel_invariance():
    """9: the vesselness chain cancels LIP constants; masks identical."""
    f, _, zoi = fixtures.fundus_phantom()
    cfg = vessels.PipelineConfig(probes=((6, 7),), orientations=18, k=1)
    base_map = vessels.vesselness(f, cfg)
    base_mask = vessels.segment_vessels(base_map, zoi, cfg.threshold_fraction)
    probe = vessels.build_probe(cfg.thetas()[2], 6, 7)
    left0, right0 = vessels.side_responses(f, probe, 1)
    resp0 = vessels.orientation_response(f, probe, 1)
    worst, masks_equal = 0.0, True
    for c in (-200.0, -50.0, 50.0, 200.0):
        fc = lip.lip_add(f, c)
        leftc, rightc = vessels.side_responses(fc, probe, 1)
        worst = max(worst,
                    max_abs_diff(leftc, left0),
                    max_abs_diff(rightc, right0),
                    max_abs_diff(vessels.orientation_response(fc, probe, 1),
                                 resp0))
        vmap = vessels.vesselness(fc, cfg)
        worst = max(worst, max_abs_diff(vmap, base_map))
        masks_equal &= np.array_equal(
            vessels.segment_vessels(vmap, zoi, cfg.threshold_fraction), base_mask)
    ok = worst <= TOL_INV and masks_equal
    return ok, f"max dev {worst:.3e}, masks identical: {masks_equal}"


def criterion_darkening_exact():
    """10: the channel darkening recipe matches the scalar oracle exactly."""
    channel = np.arange(256, dtype=np.float64)
    darks = [0.0, 25.5, 100.3, 199.99, 230.0 * -math.expm1(-1.0)]
    mismatches = 0
    for c in darks:
        got = evaluate.darken_channel(channel, c)
        want = np.array([oracle.darken_value(v, c) for v in range(256)])
        mismatches += int(np.sum(got != want))
        if np.any((got < 0) | (got > 255) | (got != np.floor(got))):
            mismatches += 1
    return mismatches == 0, f"{mismatches} mismatches over 256x5 value pairs"


def criterion_auc():
    """11: trapezoidal ROC AUC equals the rank-statistic value."""
    rng = np.random.default_rng(20240211)
    worst = 0.0
    for i in range(100):
        n = int(rng.integers(20, 200))
        if i % 2:
            scores = rng.integers(0, 8, n).astype(np.float64)  # heavy ties
        else:
            scores = rng.uniform(0.0, 1.0, n)
        labels = rng.random(n) < 0.4
        if not labels.any():
            labels[0] = True
        if labels.all():
            labels[0] = False
        got = evaluate.auc_from_map(-scores[None, :], labels[None, :])
        worst = max(worst, abs(got - oracle.rank_auc(scores, labels)))
    return worst <= TOL, f"max |trapezoid - rank| = {worst:.3e} over 100 sets"


def criterion_drive(drive_dir=None):
    """12 (optional): DRIVE reproduction with the default configuration."""
    if drive_dir is None:
        return None, "skipped: no DRIVE directory supplied"
    from .drive import run_drive
    initial, dark = run_drive(drive_dir, darken=True)
    rel = evaluate.relative_auc_diff(initial, dark)
    ok = initial >= 0.90 and rel <= 0.06
    return ok, (f"mean AUC initial {initial:.4f} (>= 0.90), "
                f"relative diff {100 * rel:.2f}% (<= 6%)")


CRITERIA = [
    ("adjunction", criterion_adjunction),
    ("isomorphism equivalence", criterion_isomorphism),
    ("duality", criterion_duality),
    ("filter axioms", criterion_filter_axioms),
    ("bound preservation", criterion_bound_preservation),
    ("rank degeneracy", criterion_rank_degeneracy),
    ("asplund identities", criterion_asplund_identities),
    ("illumination invariance", criterion_invariance_suite),
    ("vessel pipeline invariance", criterion_vessel_invariance),
    ("darkening bit-exactness", criterion_darkening_exact),
    ("AUC correctness", criterion_auc),
]


def run(drive_dir=None, only=None):
    """Run the acceptance checks, print one line each, return overall success."""
    all_ok = True
    for i, (name, fn) in enumerate(CRITERIA, start=1):
        if only is not None and i != only:
            continue
        ok, detail = fn()
        all_ok &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {i:2d} {name}: {detail}")
    if only is None or only == 12:
        ok, detail = criterion_drive(drive_dir)
        if ok is None:
            print(f"[SKIP] criterion 12 DRIVE reproduction: {detail}")
        else:
            all_ok &= ok
            print(f"[{'PASS' if ok else 'FAIL'}] criterion 12 DRIVE reproduction: {detail}")
    return all_ok
