"""Command-line front end.

Images come in as 8-bit PNG/PGM (or TIF/GIF for datasets) or as raw float
maps (``.f32``/``.lgm``); operator outputs default to float maps so that
out-of-range values survive, with ``--scale`` quantizing to 8 bits when the
output path ends in .png/.pgm.
"""

import argparse
import sys

import numpy as np

from . import (asplund, drive, evaluate, fixtures, io, lip, morphology,
               residues, selftest, vessels)
from .image import (StructuringFunction, disk, from_array, gaussian_ring,
                    half_sphere, line_segment, ring)

_FLOAT_EXTS = (".f32", ".lgm")


def _is_float_map(path):
    return str(path).lower().endswith(_FLOAT_EXTS)


def _parse_params(text):
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part:
            key, value = part.split("=", 1)
            out[key.strip()] = value.strip()
        else:
            out[part] = True
    return out


def parse_se(spec, m=256.0):
    """Structuring function from a generator spec or an image file.

    Generators: ``disk:r=5[,value=V]``, ``halfsphere:r=16[,base=127][,amp=A]``,
    ``ring:rin=4,rout=6[,value=V]``,
    ``gaussring:rin=4,rout=6[,ring=V][,sigma=S][,amp=A][,core=C]``,
    ``line:l=7[,theta=T][,value=V]``.
    Files: ``file:PATH[,oy=Y][,ox=X]`` (finite pixels form the support).
    A trailing ``,flat`` zeroes the values of any spec.
    """
    if ":" not in spec:
        raise ValueError(f"bad structuring spec {spec!r}; expected name:params")
    kind, params = spec.split(":", 1)
    p = _parse_params(params)
    if kind == "disk":
        sf = disk(float(p["r"]), float(p.get("value", 0.0)))
    elif kind == "halfsphere":
        amp = float(p["amp"]) if "amp" in p else None
        sf = half_sphere(float(p["r"]), float(p.get("base", 127.0)), amp)
    elif kind == "ring":
        sf = ring(float(p["rin"]), float(p["rout"]), float(p.get("value", 0.0)))
    elif kind == "gaussring":
        core = int(p["core"]) if "core" in p else None
        sf = gaussian_ring(int(p["rin"]), int(p["rout"]),
                           float(p.get("ring", 0.0)),
                           float(p.get("sigma", 1.5)),
                           float(p.get("amp", 50.0)), core)
    elif kind == "line":
        sf = line_segment(int(p["l"]), float(p.get("theta", 0.0)),
                     float(p.get("value", 0.0)))
    elif kind == "file":
        path = params.split(",")[0]
        arr = (io.read_float_map(path)[0] if _is_float_map(path)
               else io.read_grey(path))
        origin = None
        if "oy" in p or "ox" in p:
            origin = (int(p.get("oy", 0)), int(p.get("ox", 0)))
        sf = from_array(arr, origin=origin)
    else:
        raise ValueError(f"unknown structuring generator {kind!r}")
    if p.get("flat"):
        sf = StructuringFunction(sf.offsets, np.zeros(sf.size))
    return sf


def _load_grey(path, m):
    if _is_float_map(path):
        arr, header_m = io.read_float_map(path)
        return arr, (header_m if m is None else m)
    return io.read_grey(path), (256.0 if m is None else m)


def _save_map(path, arr, m, scale):
    if _is_float_map(path):
        io.write_float_map(path, arr, m)
    else:
        io.write_grey_u8(path, io.to_u8(arr, scale))


def _load_mask(spec, reference_image=None):
    if spec == "none":
        return None
    if spec == "auto":
        if reference_image is None:
            raise ValueError("--zoi auto needs an input image")
        return vessels.estimate_zoi(reference_image)
    arr = io.read_image(spec)
    if arr.ndim == 3:
        arr = arr.mean(axis=2)
    return arr > 127


def _build_probe_parts(args):
    probe = vessels.build_probe(args.theta, args.w, args.l,
                                args.center, args.side)
    union = StructuringFunction(
        np.vstack([probe.center.offsets, probe.left.offsets,
                   probe.right.offsets]),
        np.concatenate([probe.center.values, probe.left.values,
                        probe.right.values]))
    return probe, union


def cmd_op(args):
    f, m = _load_grey(args.input, args.m)
    t = args.threads
    se = parse_se(args.se, m) if args.se else None
    se2 = parse_se(args.se2, m) if args.se2 else None

    def need(flag, value):
        if value is None:
            raise ValueError(f"op {args.name} requires {flag}")
        return value

    name = args.name
    if name == "erode":
        out = morphology.erode(f, need("--se", se), t)
    elif name == "dilate":
        out = morphology.dilate(f, need("--se", se), t)
    elif name == "open":
        out = morphology.opening(f, need("--se", se), t)
    elif name == "close":
        out = morphology.closing(f, need("--se", se), t)
    elif name == "log-erode":
        out = morphology.log_erode(f, need("--se", se), m, t)
    elif name == "log-dilate":
        out = morphology.log_dilate(f, need("--se", se), m, t)
    elif name == "log-open":
        out = morphology.log_opening(f, need("--se", se), m, t)
    elif name == "log-close":
        out = morphology.log_closing(f, need("--se", se), m, t)
    elif name == "rank":
        fn = morphology.rank_min if args.select == "min" else morphology.rank_max
        out = fn(f, need("--se", se), need("--k", args.k), t)
    elif name == "log-rank":
        fn = (morphology.log_rank_min if args.select == "min"
              else morphology.log_rank_max)
        out = fn(f, need("--se", se), need("--k", args.k), m, t)
    elif name == "asplund":
        out = asplund.asplund_map(f, need("--se", se), m, t)
    elif name == "asplund-tol":
        p = need("--p", args.p)
        if args.classical:
            out = asplund.classical_tol_map(f, need("--se", se), p, t)
        else:
            out = asplund.asplund_map_tol(f, need("--se", se), p, m, t)
    elif name == "gradient":
        out = asplund.gradient(f, need("--se", se), t)
    elif name == "lip-gradient":
        out = asplund.lip_gradient(f, need("--se", se), m, t)
    elif name == "tophat":
        out = residues.top_hat(f, need("--se", se), t)
    elif name == "lip-tophat":
        out = residues.lip_top_hat(f, need("--se", se), m, t)
    elif name == "ext-tophat":
        out = residues.extended_top_hat(f, need("--se", se), t)
    elif name == "ext-lip-tophat":
        out = residues.extended_lip_top_hat(f, need("--se", se), m, t)
    elif name == "bump":
        probe, union = _build_probe_parts(args)
        if args.k:
            out = vessels.orientation_response(f, probe, args.k, m, t)
        else:
            out = residues.bump_detector(f, union, probe.left, probe.right, m, t)
    elif name == "diff-open":
        b2 = need("--se2", se2)
        if args.classical:
            out = residues.diff_of_openings(f, need("--se", se), b2, t)
        else:
            out = residues.diff_of_log_openings(f, need("--se", se), b2, m, t)
    else:
        raise ValueError(f"unknown operator {name!r}")
    _save_map(args.output, out, m, args.scale)
    return 0


def cmd_probe_gen(args):
    m = args.m if args.m is not None else 256.0
    if args.se:
        sf = parse_se(args.se, m)
    else:
        _, sf = _build_probe_parts(args)
    dense, origin = sf.to_array()
    if _is_float_map(args.out):
        io.write_float_map(args.out, dense, m)
    else:
        io.write_grey_u8(args.out, io.to_u8(dense, "clamp"))
    print(f"support {sf.size} px, origin at {origin}, "
          f"bbox {dense.shape[0]}x{dense.shape[1]}")
    return 0


def cmd_fixture_gen(args):
    m = 256.0
    if args.kind == "bump-signal":
        f, _, _ = fixtures.bump_signal(length=args.size or 192, shift=args.shift)
        if args.noise:
            f = fixtures.add_impulse_noise(f, args.noise, 80.0, args.seed)
        _save_map(args.out, f, m, args.scale)
    elif args.kind == "spiral-drift":
        f = fixtures.spiral_image(size=args.size or 96)
        if args.drift == "plane":
            f = lip.lip_add(f, fixtures.plane_field(*f.shape, args.drift_max))
        elif args.drift == "const":
            f = lip.lip_add(f, args.drift_max)
        _save_map(args.out, f, m, args.scale)
    elif args.kind == "fundus-phantom":
        if args.color:
            rgb, gt, zoi = fixtures.fundus_phantom_rgb(size=args.size or 64)
            io.write_rgb_u8(args.out, rgb)
        else:
            f, gt, zoi = fixtures.fundus_phantom(size=args.size or 64)
            _save_map(args.out, f, m, args.scale)
        if args.gt_out:
            io.write_grey_u8(args.gt_out, gt.astype(np.uint8) * 255)
        if args.zoi_out:
            io.write_grey_u8(args.zoi_out, zoi.astype(np.uint8) * 255)
    else:
        raise ValueError(f"unknown fixture {args.kind!r}")
    return 0


def cmd_darken(args):
    img = io.read_image(args.input)
    if args.center is not None and args.radius is not None:
        x, y = (float(v) for v in args.center.split(","))
        params = evaluate.DarkeningParams(x, y, args.radius, args.i0)
    else:
        params = evaluate.fit_zoi_circle(vessels.estimate_zoi(img), args.i0)
    field = evaluate.darkening_field(params, img.shape[0], img.shape[1])
    if img.ndim == 3:
        out = evaluate.darken_rgb(img, field)
        io.write_rgb_u8(args.output, out.astype(np.uint8))
    else:
        out = evaluate.darken_channel(img, field)
        io.write_grey_u8(args.output, out.astype(np.uint8))
    return 0


def cmd_vessel_seg(args):
    config = (vessels.PipelineConfig.from_file(args.config) if args.config
              else vessels.PipelineConfig())
    img = io.read_image(args.input)
    zoi = _load_mask(args.zoi, reference_image=img)
    mask, vmap, zoi = vessels.segment_fundus(img, config, zoi=zoi,
                                             threads=args.threads,
                                             lip_input=args.lip_input)
    io.write_grey_u8(args.output, mask.astype(np.uint8) * 255)
    if args.map_out:
        io.write_float_map(args.map_out, vmap, 256.0)
    return 0


def cmd_eval_metrics(args):
    mask = io.read_image(args.mask) > 127
    truth = io.read_image(args.gt)
    truth = (truth.mean(axis=2) if truth.ndim == 3 else truth) > 127
    zoi = _load_mask(args.zoi) if args.zoi != "none" else None
    auc = None
    if args.map:
        vmap, _ = io.read_float_map(args.map)
        auc = evaluate.auc_from_map(vmap, truth, zoi)
    met = evaluate.confusion(mask, truth, zoi, auc=auc)
    print("image\tAUC\tAcc\tSe\tSp")
    auc_text = f"{met.auc:.4f}" if met.auc is not None else "-"
    print(f"{args.mask}\t{auc_text}\t{met.accuracy:.4f}"
          f"\t{met.sensitivity:.4f}\t{met.specificity:.4f}")
    return 0


def cmd_eval_drive(args):
    config = (vessels.PipelineConfig.from_file(args.config) if args.config
              else vessels.PipelineConfig())
    drive.run_drive(args.dir, config, darken=args.darken, limit=args.limit,
                    threads=args.threads, report=print)
    return 0


def cmd_selftest(args):
    ok = selftest.run(drive_dir=args.drive_dir, only=args.criterion)
    return 0 if ok else 1


def build_parser():
    top = argparse.ArgumentParser(
        prog="logmorph",
        description="Morphology on the bounded logarithmic grey scale.")
    sub = top.add_subparsers(dest="command", required=True)

    op = sub.add_parser("op", help="apply one operator to an image")
    op.add_argument("name", choices=[
        "erode", "dilate", "open", "close",
        "log-erode", "log-dilate", "log-open", "log-close",
        "rank", "log-rank", "asplund", "asplund-tol",
        "gradient", "lip-gradient", "tophat", "lip-tophat",
        "ext-tophat", "ext-lip-tophat", "bump", "diff-open"])
    op.add_argument("input")
    op.add_argument("output")
    op.add_argument("--se", help="structuring spec, e.g. disk:r=5")
    op.add_argument("--se2", help="second structuring spec (diff-open)")
    op.add_argument("--k", type=int, help="rank (number of extrema discarded)")
    op.add_argument("--select", choices=["min", "max"], default="min")
    op.add_argument("--p", type=float, help="tolerance percentage in (0, 1]")
    op.add_argument("--classical", action="store_true",
                    help="classical-arithmetic variant where applicable")
    op.add_argument("--theta", type=float, default=0.0)
    op.add_argument("--w", type=float, default=6.0, help="probe width (bump)")
    op.add_argument("--l", type=int, default=7, help="probe length (bump)")
    op.add_argument("--center", type=float, default=10.0)
    op.add_argument("--side", type=float, default=0.0)
    op.add_argument("--m", type=float, default=None,
                    help="grey bound (default 256, or the float-map header)")
    op.add_argument("--threads", type=int, default=1)
    op.add_argument("--scale", choices=["clamp", "minmax"], default="clamp",
                    help="8-bit quantization for .png/.pgm outputs")
    op.set_defaults(func=cmd_op)

    probe = sub.add_parser("probe", help="probe utilities")
    probe_sub = probe.add_subparsers(dest="probe_cmd", required=True)
    pg = probe_sub.add_parser("gen", help="rasterize a probe to a file")
    pg.add_argument("--se", help="render this spec instead of a 3-segment probe")
    pg.add_argument("--theta", type=float, default=0.0)
    pg.add_argument("--w", type=float, default=6.0)
    pg.add_argument("--l", type=int, default=7)
    pg.add_argument("--center", type=float, default=10.0)
    pg.add_argument("--side", type=float, default=0.0)
    pg.add_argument("--m", type=float, default=None)
    pg.add_argument("--out", required=True)
    pg.set_defaults(func=cmd_probe_gen)

    fixture = sub.add_parser("fixture", help="synthetic test images")
    fixture_sub = fixture.add_subparsers(dest="fixture_cmd", required=True)
    fg = fixture_sub.add_parser("gen")
    fg.add_argument("kind", choices=["spiral-drift", "bump-signal",
                                     "fundus-phantom"])
    fg.add_argument("--out", required=True)
    fg.add_argument("--size", type=int)
    fg.add_argument("--seed", type=int, default=0)
    fg.add_argument("--noise", type=int, default=0)
    fg.add_argument("--shift", type=float, default=80.0)
    fg.add_argument("--drift", choices=["none", "plane", "const"],
                    default="none")
    fg.add_argument("--drift-max", type=float, default=60.0)
    fg.add_argument("--color", action="store_true")
    fg.add_argument("--gt-out")
    fg.add_argument("--zoi-out")
    fg.add_argument("--scale", choices=["clamp", "minmax"], default="clamp")
    fg.set_defaults(func=cmd_fixture_gen)

    dk = sub.add_parser("darken", help="apply the radial darkening model")
    dk.add_argument("input")
    dk.add_argument("output")
    dk.add_argument("--i0", type=float, default=230.0)
    dk.add_argument("--center", help="x,y of the field centre")
    dk.add_argument("--radius", type=float)
    dk.set_defaults(func=cmd_darken)

    vessel = sub.add_parser("vessel", help="vessel segmentation")
    vessel_sub = vessel.add_subparsers(dest="vessel_cmd", required=True)
    vs = vessel_sub.add_parser("seg")
    vs.add_argument("input")
    vs.add_argument("output")
    vs.add_argument("--config", help="pipeline config file")
    vs.add_argument("--zoi", default="auto", help="auto | none | mask file")
    vs.add_argument("--map-out", help="write the vesselness map here")
    vs.add_argument("--lip-input", action="store_true",
                    help="grey input is already an inverted-scale luminance")
    vs.add_argument("--threads", type=int, default=1)
    vs.set_defaults(func=cmd_vessel_seg)

    ev = sub.add_parser("eval", help="evaluation tools")
    ev_sub = ev.add_subparsers(dest="eval_cmd", required=True)
    em = ev_sub.add_parser("metrics")
    em.add_argument("mask")
    em.add_argument("gt")
    em.add_argument("--zoi", default="none", help="mask file or none")
    em.add_argument("--map", help="float map for the AUC column")
    em.set_defaults(func=cmd_eval_metrics)
    ed = ev_sub.add_parser("drive")
    ed.add_argument("--dir", required=True)
    ed.add_argument("--config")
    ed.add_argument("--darken", action="store_true")
    ed.add_argument("--limit", type=int)
    ed.add_argument("--threads", type=int, default=1)
    ed.set_defaults(func=cmd_eval_drive)

    st = sub.add_parser("selftest", help="run the acceptance checks")
    st.add_argument("--criterion", type=int)
    st.add_argument("--drive-dir")
    st.set_defaults(func=cmd_selftest)
    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:             # one-line machine-parsable failure
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
