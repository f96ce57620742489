"""DRIVE-layout batch runner, exercised on a synthetic mini-dataset."""

import numpy as np
import pytest

from logmorph import drive, fixtures, io, vessels


@pytest.fixture
def mini_dataset(tmp_path):
    for sub in ("images", "1st_manual", "mask"):
        (tmp_path / sub).mkdir()
    for i, angles in enumerate(((0.25, 1.35, 2.45), (0.7, 1.9)), start=1):
        rgb, gt, zoi = fixtures.fundus_phantom_rgb(angles=angles)
        io.write_rgb_u8(tmp_path / "images" / f"{i:02d}_test.png",
                        rgb.astype(float))
        io.write_grey_u8(tmp_path / "1st_manual" / f"{i:02d}_manual1.png",
                         gt.astype(float) * 255)
        io.write_grey_u8(tmp_path / "mask" / f"{i:02d}_test_mask.png",
                         zoi.astype(float) * 255)
    return tmp_path


def test_case_discovery(mini_dataset):
    cases = drive.find_cases(mini_dataset)
    assert [idx for idx, *_ in cases] == ["01", "02"]
    assert all(fov is not None for *_, fov in cases)


def test_missing_ground_truth(tmp_path):
    (tmp_path / "images").mkdir()
    io.write_grey_u8(tmp_path / "images" / "01_test.png", np.zeros((4, 4)))
    with pytest.raises(FileNotFoundError):
        drive.find_cases(tmp_path)


def test_run_drive_initial_and_dark(mini_dataset):
    config = vessels.PipelineConfig(probes=((6, 7),), orientations=12, k=1)
    lines = []
    initial, dark = drive.run_drive(mini_dataset, config, darken=True,
                                    report=lines.append)
    assert 0.5 < initial <= 1.0
    assert 0.5 < dark <= 1.0
    assert lines[0].startswith("image\t")
    per_image = [ln for ln in lines if ln.startswith(("01", "02"))]
    assert len(per_image) == 4          # two images x two variants
    assert lines[-2].startswith("mean\tinitial")
    assert lines[-1].startswith("mean\tdark")


def test_run_drive_respects_limit(mini_dataset):
    config = vessels.PipelineConfig(probes=((6, 7),), orientations=6, k=1)
    lines = []
    initial, dark = drive.run_drive(mini_dataset, config, limit=1,
                                    report=lines.append)
    assert dark is None
    assert sum(ln.startswith("01") for ln in lines) == 1
    assert not any(ln.startswith("02") for ln in lines)
