#!/usr/bin/env python3
"""Smoke test for the tpctf_py extension module.

Builds nothing itself: expects `cargo build -p tpctf-py [--release]` to have
produced the cdylib, which is copied next to a temp dir under an importable
name. Run from the repository root:

    cargo build -p tpctf-py --release
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    names = ["libtpctf_py.so", "tpctf_py.dll", "libtpctf_py.dylib"]
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in names
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit("cdylib not found; run `cargo build -p tpctf-py` first")


def main() -> None:
    lib = locate_cdylib()
    with tempfile.TemporaryDirectory() as td:
        suffix = ".pyd" if lib.suffix == ".dll" else ".so"
        shutil.copy(lib, Path(td) / f"tpctf_py{suffix}")
        sys.path.insert(0, td)
        import tpctf_py

        # bank construction and frame checks
        bank = tpctf_py.Bank(6, 1024)
        pr1, pr0 = bank.tight_frame_residuals()
        assert pr1 <= 1e-8 and pr0 <= 1e-8, (pr1, pr0)
        pr1_2d, pr0_2d = bank.tight_frame_residuals_2d()
        assert pr1_2d <= 1e-7 and pr0_2d <= 1e-7, (pr1_2d, pr0_2d)
        assert bank.highpass_count_2d() == 32
        assert "b2n" in bank.labels()
        assert not bank.warnings()
        assert tpctf_py.direction_count_py(6) == 14
        doc = bank.to_json()
        assert '"grid_size": 1024' in doc

        # deterministic noise stream
        a = tpctf_py.normals(42, 16)
        b = tpctf_py.normals(42, 16)
        assert a == b and len(a) == 16

        # transform round trip and denoising on the vendored image
        camera = ROOT / "assets" / "images" / "camera512.pgm"
        err = tpctf_py.roundtrip_error(str(camera), 6, 6)
        assert err <= 1e-9, err
        defect = tpctf_py.energy_defect(str(camera), 4, 4)
        assert defect <= 1e-9, defect

        with tempfile.TemporaryDirectory() as wd:
            noisy = str(Path(wd) / "noisy.pgm")
            den = str(Path(wd) / "denoised.pgm")
            tpctf_py.add_noise(str(camera), noisy, 25.0, 1)
            before = tpctf_py.psnr(str(camera), noisy)
            tpctf_py.denoise_image(noisy, den, "tpctf6", 25.0)
            gain = tpctf_py.psnr(str(camera), den) - before
            assert gain > 5.0, gain
            assert math.isinf(tpctf_py.psnr(noisy, noisy))

    print("smoke test passed")


if __name__ == "__main__":
    main()
