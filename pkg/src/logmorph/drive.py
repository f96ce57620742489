"""Batch evaluation on a user-supplied DRIVE-style test directory.

Expected layout (the DRIVE distribution's ``test/`` folder)::

    <dir>/images/NN_test.tif      colour fundus photographs
    <dir>/1st_manual/NN_manual1.gif   vessel ground truth
    <dir>/mask/NN_test_mask.gif   field-of-view masks (optional)

The dataset itself is not shipped; point ``logmorph eval drive`` or
``logmorph selftest --drive-dir`` at your copy.
"""

import glob
import os
import re

import numpy as np

from . import evaluate, io, vessels

__all__ = ["find_cases", "run_case", "run_drive"]


def _index_of(path):
    match = re.search(r"(\d+)", os.path.basename(path))
    return match.group(1) if match else os.path.basename(path)


def find_cases(test_dir):
    images = sorted(glob.glob(os.path.join(test_dir, "images", "*")))
    if not images:
        raise FileNotFoundError(f"no images under {test_dir}/images")
    truths = {_index_of(p): p
              for p in glob.glob(os.path.join(test_dir, "1st_manual", "*"))}
    fovs = {_index_of(p): p
            for p in glob.glob(os.path.join(test_dir, "mask", "*"))}
    cases = []
    for img in images:
        idx = _index_of(img)
        if idx not in truths:
            raise FileNotFoundError(f"no ground truth for image {img}")
        cases.append((idx, img, truths[idx], fovs.get(idx)))
    return cases


def run_case(rgb, truth, fov, config, threads=1):
    """Segment one image and return its metrics (AUC included)."""
    mask, vmap, zoi = vessels.segment_fundus(rgb, config, zoi=fov,
                                             threads=threads)
    auc = evaluate.auc_from_map(vmap, truth, zoi)
    return evaluate.confusion(mask, truth, zoi, auc=auc)


def run_drive(test_dir, config=None, darken=False, limit=None, threads=1,
              report=None):
    """Evaluate every test image; returns (mean initial AUC, mean dark AUC).

    With ``darken`` the run is repeated on copies darkened by the radial
    exposure model fitted to each field of view.  ``report`` receives one
    formatted line per image and the mean rows.
    """
    config = config or vessels.PipelineConfig()
    say = report or (lambda line: None)
    cases = find_cases(test_dir)
    if limit:
        cases = cases[:limit]
    say("image\tvariant\tAUC\tAcc\tSe\tSp")
    sums = {"initial": [], "dark": []}
    for idx, img_path, truth_path, fov_path in cases:
        rgb = io.read_image(img_path)
        truth = io.read_image(truth_path)
        truth = (truth.mean(axis=2) if truth.ndim == 3 else truth) > 127
        fov = None
        if fov_path:
            fov = io.read_image(fov_path)
            fov = (fov.mean(axis=2) if fov.ndim == 3 else fov) > 127
        variants = [("initial", rgb)]
        if darken:
            zoi = fov if fov is not None else vessels.estimate_zoi(rgb)
            params = evaluate.fit_zoi_circle(zoi)
            field = evaluate.darkening_field(params, *rgb.shape[:2])
            variants.append(("dark", evaluate.darken_rgb(rgb, field)))
        for tag, img in variants:
            met = run_case(img, truth, fov, config, threads)
            sums[tag].append(met.auc)
            say(f"{idx}\t{tag}\t{met.auc:.4f}\t{met.accuracy:.4f}"
                f"\t{met.sensitivity:.4f}\t{met.specificity:.4f}")
    mean_initial = float(np.mean(sums["initial"]))
    mean_dark = float(np.mean(sums["dark"])) if sums["dark"] else None
    say(f"mean\tinitial\t{mean_initial:.4f}")
    if mean_dark is not None:
        rel = evaluate.relative_auc_diff(mean_initial, mean_dark)
        say(f"mean\tdark\t{mean_dark:.4f}\trel AUC diff {100 * rel:.2f}%")
    return mean_initial, mean_dark
