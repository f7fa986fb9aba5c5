"""Command-line front end.

Subcommands: groundstate, spectrum, sweep, verify, collision, resonance.
Configuration may come from a ``key = value`` text file (``--config``);
command-line flags override file values.  Data goes to CSV (17
significant digits, with the resolved configuration echoed in ``#``
header lines) or JSON; plots are deterministic SVG.  Exit status: 0 on
success, 1 on validation/usage errors, 2 on solver failures.
"""

import argparse
import json
import sys

import numpy as np

from . import experiments as xp
from .errors import (EmptyDataset, InvalidExponent, InvalidMesh,
                     NlsSpectraError, OutOfRange, UsageError)
from .groundstate import export_profile_csv, solve_ground_state
from .linearized import (build_cal_L, build_H, build_L_plus_minus,
                         build_sector_Lmk, build_sector_LXk)
from .mesh import line_mesh, make_mesh
from .oracle import oracle_report

_G = "%.17g"


# ------------------------------------------------------------ config

def _parse_config_file(path):
    out = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{ln}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _parse_complex(text):
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


# ------------------------------------------------------------- output

def _write_csv(path, header_cfg, columns, rows):
    lines = [f"# {k} = {v}" for k, v in sorted(header_cfg.items())]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_G % v if isinstance(v, float) else str(v)
                              for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_csv(path):
    """Read back a CSV written by this tool: (config dict, columns, rows)."""
    cfg, columns, rows = {}, None, []
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                k, _, v = line[1:].partition("=")
                cfg[k.strip()] = _maybe_float(v.strip())
            elif columns is None:
                columns = line.split(",")
            elif line:
                rows.append([_maybe_float(c) for c in line.split(",")])
    return cfg, columns or [], rows


def _maybe_float(text):
    try:
        return float(text)
    except ValueError:
        return text


# -------------------------------------------------------------- SVG

_SVG_W, _SVG_H, _MARGIN = 640, 480, 50
_COLORS = ("#1f5fa8", "#c23b22", "#2e8540", "#8031a7", "#b8860b",
           "#007070", "#aa3377", "#556b2f")


def _svg_header():
    return [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_SVG_W}" height="{_SVG_H}" '
            f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
            f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>']


def _scale(vals, lo_pix, hi_pix):
    vmin, vmax = min(vals), max(vals)
    if vmax - vmin < 1e-30:
        vmin, vmax = vmin - 1.0, vmax + 1.0
    span = vmax - vmin

    def to_pix(v):
        return lo_pix + (v - vmin) / span * (hi_pix - lo_pix)

    return to_pix, vmin, vmax


def emit_sweep_plot(rows, path):
    """Eigenvalue curves against log10(p - 1), one color per
    (operator, classification) group; imaginary parts solid circles,
    real parts open circles."""
    pts = [(np.log10(r.p - 1.0), r.im, r.re, f"{r.operator}:{r.cls}")
           for r in rows if r.p > 1.0 and r.cls != "continuous_band"]
    if not pts:
        raise EmptyDataset("nothing to plot")
    xs = [q[0] for q in pts]
    ys = [q[1] for q in pts] + [q[2] for q in pts]
    xpix, *_ = _scale(xs, _MARGIN, _SVG_W - _MARGIN)
    ypix, *_ = _scale(ys, _SVG_H - _MARGIN, _MARGIN)
    groups = sorted({q[3] for q in pts})
    out = _svg_header()
    out.append(f'<line x1="{_MARGIN}" y1="{_SVG_H - _MARGIN}" '
               f'x2="{_SVG_W - _MARGIN}" y2="{_SVG_H - _MARGIN}" '
               f'stroke="black"/>')
    out.append(f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
               f'y2="{_SVG_H - _MARGIN}" stroke="black"/>')
    out.append(f'<text x="{_SVG_W // 2}" y="{_SVG_H - 12}" '
               f'font-size="13">log10(p - 1)</text>')
    for gi, g in enumerate(groups):
        color = _COLORS[gi % len(_COLORS)]
        for x, im, re, tag in pts:
            if tag != g:
                continue
            out.append(f'<circle cx="{xpix(x):.2f}" cy="{ypix(im):.2f}" '
                       f'r="2.2" fill="{color}"/>')
            out.append(f'<circle cx="{xpix(x):.2f}" cy="{ypix(re):.2f}" '
                       f'r="2.2" fill="none" stroke="{color}"/>')
        out.append(f'<text x="{_SVG_W - _MARGIN - 150}" '
                   f'y="{_MARGIN + 16 * gi}" font-size="12" '
                   f'fill="{color}">{g}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


def emit_scatter_plot(eigenvalues, labels, path):
    """Complex-plane scatter in the square |Re|, |Im| < max(1, data)."""
    if len(eigenvalues) == 0:
        raise EmptyDataset("nothing to plot")
    lim = max(1.0, max(max(abs(z.real), abs(z.imag)) for z in eigenvalues))
    lim *= 1.05

    def xpix(v):
        return _MARGIN + (v + lim) / (2 * lim) * (_SVG_W - 2 * _MARGIN)

    def ypix(v):
        return _SVG_H - _MARGIN - (v + lim) / (2 * lim) * (_SVG_H - 2 * _MARGIN)

    out = _svg_header()
    out.append(f'<line x1="{xpix(-lim):.1f}" y1="{ypix(0):.1f}" '
               f'x2="{xpix(lim):.1f}" y2="{ypix(0):.1f}" stroke="#999"/>')
    out.append(f'<line x1="{xpix(0):.1f}" y1="{ypix(-lim):.1f}" '
               f'x2="{xpix(0):.1f}" y2="{ypix(lim):.1f}" stroke="#999"/>')
    kinds = sorted(set(labels))
    for ki, kind in enumerate(kinds):
        color = _COLORS[ki % len(_COLORS)]
        for z, c in zip(eigenvalues, labels):
            if c != kind:
                continue
            out.append(f'<circle cx="{xpix(z.real):.2f}" '
                       f'cy="{ypix(z.imag):.2f}" r="3" fill="{color}"/>')
        out.append(f'<text x="{_MARGIN}" y="{_MARGIN + 16 * ki}" '
                   f'font-size="12" fill="{color}">{kind}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


# --------------------------------------------------------- subcommands

def _mesh_for(n, m, dr, r_max):
    return line_mesh(r_max, dr) if n == 1 else make_mesh(n, r_max=r_max,
                                                         dr=dr, m=m)


def _cmd_groundstate(cfg):
    mesh = _mesh_for(cfg["n"], cfg["m"], cfg["dr"], cfg["r_max"])
    profile = solve_ground_state(cfg["n"], cfg["p"], m=cfg["m"], mesh=mesh)
    export_profile_csv(profile, cfg["out"])
    print(f"ground state n={cfg['n']} p={cfg['p']} m={cfg['m']}: "
          f"{profile.iterations} iterations, residual "
          f"{profile.residual_inf:.3e} -> {cfg['out']}", file=sys.stderr)
    return 0


def _build_operator(profile, mesh, kind):
    if kind in ("Lplus", "Lminus"):
        return build_L_plus_minus(profile, mesh, kind[1:])
    if kind == "H":
        return build_H(profile, mesh)
    if kind == "calL":
        return build_cal_L(profile, mesh)
    if kind.startswith("X"):
        return build_sector_LXk(profile, mesh, int(kind[1:]))
    if kind.startswith("Lmk:"):
        return build_sector_Lmk(profile, mesh, int(kind.split(":")[1]))
    raise UsageError(f"unknown operator {kind!r}")


def _cmd_spectrum(cfg):
    from .eigen import shift_invert_arnoldi, symmetric_eigs
    from .oracle import p_critical

    mesh = _mesh_for(cfg["n"], cfg["m"], cfg["dr"], cfg["r_max"])
    profile = solve_ground_state(cfg["n"], cfg["p"], m=cfg["m"], mesh=mesh)
    op = _build_operator(profile, mesh, cfg["op"])
    common = dict(dr=cfg["dr"], p=cfg["p"], p_c=p_critical(cfg["n"]))
    if cfg["op"] in ("Lplus", "Lminus", "H"):
        res = symmetric_eigs(op, cfg["count"], **common)
        eigs = res.eigenvalues.astype(complex)
    else:
        res = shift_invert_arnoldi(op, _parse_complex(cfg["shift"]),
                                   cfg["count"], **common)
        eigs = res.eigenvalues
    rows = [(cfg["p"], cfg["op"], i, float(z.real), float(z.imag), c,
             float(r)) for i, (z, c, r) in
            enumerate(zip(eigs, res.classifications, res.residuals))]
    _write_csv(cfg["out"], cfg,
               ["p", "operator", "eig_index", "re", "im", "class",
                "residual"], rows)
    if cfg["plot"]:
        emit_scatter_plot(eigs, res.classifications, cfg["plot"])
    return 0


def _cmd_sweep(cfg):
    kinds = tuple(cfg["ops"].split(","))
    if cfg["sectors"]:
        a, _, b = cfg["sectors"].partition("..")
        kinds = tuple(f"X{k}" for k in range(int(a), int(b) + 1))
    ps = list(np.arange(cfg["p_from"], cfg["p_to"] + 1e-12, cfg["p_step"]))
    spec = xp.SweepSpec(n=cfg["n"], m=cfg["m"], p_values=ps,
                        operator_kinds=kinds, dr=cfg["dr"],
                        r_max=cfg["r_max"], eig_count=cfg["count"])
    rows = xp.run_sweep(spec)
    _write_csv(cfg["out"], cfg,
               ["p", "operator", "eig_index", "re", "im", "class",
                "residual"],
               [(r.p, r.operator, r.eig_index, r.re, r.im, r.cls,
                 r.residual) for r in rows])
    if cfg["plot"]:
        emit_sweep_plot(rows, cfg["plot"])
    return 0


def _cmd_verify(cfg):
    suite, p, n = cfg["suite"], cfg["p"], cfg["n"]
    ok = True
    if suite == "interlacing":
        rep = xp.verify_interlacing(p, dr=cfg["dr"], r_max=cfg["r_max"])
        for c in rep["checks"]:
            status = "PASS" if c["ok"] else "FAIL"
            print(f"{status} j={c['j']}: {c['lower']:.6f} <= "
                  f"mu={c['mu']:.6f} <= {c['upper']:.6f} "
                  f"(margins {c['mu'] - c['lower']:+.2e}, "
                  f"{c['upper'] - c['mu']:+.2e})")
            ok &= c["ok"]
    elif suite == "equivalence":
        rep = xp.equivalence_report(p, dr=cfg["dr"], r_max=cfg["r_max"])
        for row in rep["rows"]:
            good = (row["equivalence_err"] <= 1e-5
                    and row["quotient_rel_err"] <= 1e-4)
            print(f"{'PASS' if good else 'FAIL'} mu={row['mu_H']:.8f} "
                  f"factorization err {row['equivalence_err']:.2e}, "
                  f"quotient rel err {row['quotient_rel_err']:.2e}")
            ok &= good
    elif suite == "bifurcation":
        rep = xp.bifurcation_report(n)
        ok = rep["rel_err"] <= 0.2
        print(f"{'PASS' if ok else 'FAIL'} n={n}: slope "
              f"{rep['slope_measured']:.4f} vs predicted "
              f"{rep['slope_predicted']:.4f} (rel {rep['rel_err']:.3f})")
    elif suite == "nullspace":
        rep = xp.nullspace_report(n, p)
        ok = rep["ok"]
        print(f"{'PASS' if ok else 'FAIL'} n={n} p={p}: generalized "
              f"nullspace dimension {rep['measured']} "
              f"(expected {rep['expected']})")
    elif suite == "oracle":
        print(json.dumps(oracle_report(n, p), indent=2))
    else:
        raise UsageError(f"unknown suite {suite!r}")
    return 0 if ok else 1


def _cmd_collision(cfg):
    ev = xp.locate_collision(cfg["m"], cfg["k"], (cfg["p_lo"], cfg["p_hi"]),
                             dr=cfg["dr"], r_max=cfg["r_max"])
    _write_csv(cfg["out"], cfg, ["m", "k", "p_star", "re_star", "im_star"],
               [(ev.m, ev.k, ev.p_star, ev.lambda_star.real,
                 ev.lambda_star.imag)])
    print(f"{ev.kind}: p* = {ev.p_star:.6f}, lambda* = "
          f"{ev.lambda_star:.6f}", file=sys.stderr)
    return 0


def _cmd_resonance(cfg):
    ps = list(np.round(np.arange(cfg["p_from"], cfg["p_to"] + 1e-12,
                                 cfg["p_step"]), 12))
    rep = xp.resonance_study(ps, r_max=cfg["r_max"], dr=cfg["dr"])
    cfg_echo = dict(cfg, delta=rep["delta"])
    _write_csv(cfg["out"], cfg_echo, ["p", "deviation"], rep["table"])
    print(f"delta = {rep['delta']:.6f} -> {cfg['out']}", file=sys.stderr)
    return 0


# ----------------------------------------------------------- dispatch

_DEFAULTS = {
    "groundstate": {"n": 1, "p": 3.0, "m": 0, "dr": 0.01, "r_max": 30.0,
                    "out": "-"},
    "spectrum": {"n": 1, "p": 3.0, "m": 0, "op": "calL", "count": 10,
                 "shift": "0.01+0.01i", "dr": 0.01, "r_max": 30.0,
                 "out": "-", "plot": ""},
    "sweep": {"n": 1, "m": 0, "p_from": 1.5, "p_to": 4.0, "p_step": 0.1,
              "ops": "calL", "sectors": "", "count": 10, "dr": 0.01,
              "r_max": 30.0, "out": "-", "plot": ""},
    "verify": {"suite": "interlacing", "n": 1, "p": 2.0, "dr": 0.01,
               "r_max": 30.0},
    "collision": {"m": 1, "k": 2, "p_lo": 1.005, "p_hi": 1.05, "dr": 0.01,
                  "r_max": 30.0, "out": "-"},
    "resonance": {"p_from": 2.96, "p_to": 3.04, "p_step": 0.01,
                  "dr": 0.02, "r_max": 130.0, "out": "-"},
}

_HANDLERS = {
    "groundstate": _cmd_groundstate,
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "collision": _cmd_collision,
    "resonance": _cmd_resonance,
}


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="nls-spectra",
        description="Solitary-wave profiles and linearized-operator "
                    "spectra for the nonlinear Schrodinger equation.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, defaults in _DEFAULTS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None,
                        help="key = value config file; flags override")
        for key, dval in defaults.items():
            flag = "--" + key.replace("_", "-")
            sp.add_argument(flag, dest=key, type=type(dval), default=None)
    return ap


def parse_and_dispatch(argv=None):
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    defaults = _DEFAULTS[args.command]
    try:
        file_cfg = _parse_config_file(args.config) if args.config else {}
        cfg = dict(defaults)
        for key, val in file_cfg.items():
            if key not in defaults:
                raise UsageError(f"unknown config key {key!r} for "
                                 f"command {args.command}")
            cfg[key] = type(defaults[key])(val)
        for key in defaults:
            v = getattr(args, key)
            if v is not None:
                cfg[key] = v
        return _HANDLERS[args.command](cfg)
    except (UsageError, InvalidExponent, InvalidMesh, OutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NlsSpectraError as exc:
        print(f"solver failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 2


def main(argv=None):
    return parse_and_dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
