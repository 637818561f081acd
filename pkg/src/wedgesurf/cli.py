"""Command-line front end: build, surface, realize, dual, moduli.

Commands print short summaries on stdout and write meshes, figures, and
exact certificate JSON next to the requested output path.  Runs with the
same parameters produce byte-identical outputs.  Exit status is 0 only
when every certificate in the run verifies; bad parameters raise a usage
error instead.  Set WEDGE_LOG=info or WEDGE_LOG=debug for progress
logging on stderr.
"""

from __future__ import annotations

import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import meshio
from .complexes import check_orientable
from .exactkernel import rational_str
from .figures import render_complex
from .moduli import moduli_bounds
from .polytope import wp_system
from .projection import (
    DELTA_DEFAULT,
    EPS_DEFAULT,
    M_DEFAULT,
    CertificationError,
    build_deformed_wp,
    build_prism_pipeline,
    certify_surface,
    project_surface,
)
from .surface import (
    build_surface,
    check_flag_transitive,
    surface_genus,
    surface_is_connected,
    surface_is_manifold,
    surface_orientation,
)
from .wpcombin import WpParams, wp_vertices

log = logging.getLogger("wedgesurf")

_LOG_LEVELS = {
    "error": logging.ERROR,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def _configure_logging() -> None:
    name = os.environ.get("WEDGE_LOG", "error").strip().lower()
    if name not in _LOG_LEVELS:
        raise click.UsageError(
            f"WEDGE_LOG must be one of error, info, debug; got {name!r}"
        )
    logging.basicConfig(
        level=_LOG_LEVELS[name],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


class RationalType(click.ParamType):
    """Accepts "1/10", "0.1", or "64" and converts exactly."""

    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


RATIONAL = RationalType()


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise click.UsageError(message)


def _yn(flag: bool) -> str:
    return "yes" if flag else "NO"


@click.group()
def main() -> None:
    """Wedge-product surfaces: construction, certification, projection."""
    _configure_logging()


@main.command()
@click.option("--p", type=int, required=True, help="polygon facet count")
@click.option("--q", type=int, default=2, show_default=True,
              help="simplex facet count")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
              default=None,
              help="write the inequality system and vertex list as JSON")
def build(p: int, q: int, out: Path | None) -> None:
    """Construct the wedge of a p-gon with a (q-1)-simplex."""
    _require(p >= 3, "p must be at least 3 (need an actual polygon)")
    _require(q >= 2, "q must be at least 2 (need at least an interval)")
    params = WpParams(p=p, q=q)
    system = wp_system(p, q)
    verts = wp_vertices(params)
    log.info("built wedge product: dim %d, %d facets", system.dim,
             system.facet_count)
    click.echo(
        f"wedge product of C_{p} with a {q - 1}-simplex: "
        f"dim {system.dim}, facets {system.facet_count}, "
        f"vertices {len(verts)}"
    )
    if out is not None:
        data = {
            "p": p,
            "q": q,
            "dim": system.dim,
            "facets": [
                {"label": list(lb), "normal": meshio.vec_json(a)}
                for lb, a in zip(system.labels, system.normals)
            ],
            "vertices": [v.to_json() for v in verts],
        }
        out.write_text(meshio.dump_json(data))
        click.echo(f"wrote {out}")


@main.command()
@click.option("--p", type=int, required=True)
@click.option("--q", type=int, default=2, show_default=True)
def surface(p: int, q: int) -> None:
    """Topology report for the polygonal surface in the 2-skeleton."""
    _require(p >= 3, "p must be at least 3 (need an actual polygon)")
    _require(q >= 2, "q must be at least 2 (need at least an interval)")
    S = build_surface(WpParams(p=p, q=q))
    f0, f1, f2 = S.f_vector()
    manifold = surface_is_manifold(S)
    connected = surface_is_connected(S)
    orientable = surface_orientation(S) is not None
    closed = manifold and connected and orientable
    line = f"f=({f0},{f1},{f2})"
    if closed:
        line += f" genus={surface_genus(S)}"
    flags = None
    notice = None
    try:
        flags = check_flag_transitive(S)
        line += f" regular={_yn(flags.transitive)}"
    except ValueError as exc:
        notice = f"notice: {exc}; reporting topology only"
    click.echo(line)
    click.echo(
        f"manifold={_yn(manifold)} connected={_yn(connected)} "
        f"orientable={_yn(orientable)}"
    )
    if flags is not None:
        click.echo(
            f"flags={flags.flag_count} orbit of base flag="
            f"{flags.orbit_size}"
        )
    if (p, q) == (3, 2):
        click.echo("octahedron, genus 0")
    if notice is not None:
        click.echo(notice)
    if not closed or (flags is not None and not flags.transitive):
        raise click.ClickException("surface checks failed")


@main.command()
@click.option("--p", type=int, required=True)
@click.option("--q", type=int, default=2, show_default=True)
@click.option("--eps", type=RATIONAL, default=EPS_DEFAULT,
              show_default="1/10", help="band deformation size")
@click.option("--M", "big_m", type=RATIONAL, default=M_DEFAULT,
              show_default="64", help="scale base between bands")
@click.option("--target", type=click.IntRange(3, 4), default=3,
              show_default=True, help="dimension of the projection image")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="mesh (.off/.obj) or JSON output path")
@click.option("--precision", type=click.IntRange(1, 40),
              default=meshio.PRECISION_DEFAULT, show_default=True,
              help="significant digits in mesh coordinates")
@click.option("--seed", type=int, default=0, show_default=True)
def realize(
    p: int,
    q: int,
    eps: Fraction,
    big_m: Fraction,
    target: int,
    out: Path | None,
    precision: int,
    seed: int,
) -> None:
    """Project the deformed wedge product to a surface in R^3 or R^4."""
    _require(p >= 3, "p must be at least 3 (need an actual polygon)")
    _require(q == 2, "realization is implemented over the interval (q=2)")
    _require(eps > 0, "eps must be a positive rational")
    _require(big_m > 0, "M must be a positive rational")
    try:
        D = build_deformed_wp(p, eps=eps, M=big_m)
        report = certify_surface(D, k=4)
        verified = report.ok and report.reverify(D.system)
        R = project_surface(D, target=target, report=report)
    except CertificationError as exc:
        raise click.ClickException(str(exc))
    log.info("deformation certified at eps=%s, M=%s", D.eps, D.M)
    if (D.eps, D.M) != (eps, big_m):
        click.echo(f"escalated to eps={D.eps}, M={D.M}")
    config = {
        "p": p,
        "q": q,
        "eps": rational_str(D.eps),
        "M": rational_str(D.M),
        "target": target,
        "precision": precision,
        "seed": seed,
    }
    if target == 4:
        out = out or Path(f"sigma_{p}_4d.json")
        payload = {
            "config": config,
            "mesh": meshio.realized_json(R),
            "certificates": meshio.report_json(report),
        }
        out.write_text(meshio.dump_json(payload))
        click.echo(
            f"wrote {out}: {len(R.cells.vertices())} vertices in R^4, "
            "exact rational coordinates"
        )
    else:
        out = out or Path(f"sigma_{p}_4.off")
        S = build_surface(WpParams(p=p, q=2))
        orientation = surface_orientation(S)
        writer = meshio.obj_text if out.suffix == ".obj" else meshio.off_text
        out.write_text(writer(R, orientation=orientation, precision=precision))
        cert_path = out.with_suffix(".certificates.json")
        cert_path.write_text(
            meshio.dump_json(
                {"config": config, "certificates": meshio.report_json(report)}
            )
        )
        fig_path = out.with_suffix(".png")
        render_complex(R, fig_path)
        f0 = len(R.cells.vertices())
        f1 = len(R.cells.edges())
        f2 = R.cells.face_count
        click.echo(f"wrote {out}: {f0} vertices, {f2} faces, {f1} edges")
        click.echo(f"wrote {cert_path} and {fig_path}")
    click.echo(
        f"certificates: {'ok' if verified else 'FAILED'} "
        f"({len(report.certificates)} faces, projection to R^4)"
    )
    if not verified:
        raise click.ClickException("certificate verification failed")


@main.command()
@click.option("--p", type=click.IntRange(4, 5), required=True,
              help="polygon facet count (hull step supports 4 and 5)")
@click.option("--eps", type=RATIONAL, default=EPS_DEFAULT,
              show_default="1/10")
@click.option("--M", "big_m", type=RATIONAL, default=M_DEFAULT,
              show_default="64")
@click.option("--delta", type=RATIONAL, default=DELTA_DEFAULT,
              show_default="1/4", help="lid slope of the prism")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="dual-surface OFF output path")
@click.option("--precision", type=click.IntRange(1, 40),
              default=meshio.PRECISION_DEFAULT, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def dual(
    p: int,
    eps: Fraction,
    big_m: Fraction,
    delta: Fraction,
    out: Path | None,
    precision: int,
    seed: int,
) -> None:
    """Dual surface of quads: prism, projection to R^4, polar, Schlegel."""
    _require(eps > 0, "eps must be a positive rational")
    _require(big_m > 0, "M must be a positive rational")
    _require(delta > 0, "delta must be a positive rational")
    try:
        result = build_prism_pipeline(p, eps=eps, M=big_m, delta=delta)
    except CertificationError as exc:
        raise click.ClickException(str(exc))
    verified = (
        result.report.ok
        and result.report.reverify(result.prism.system)
        and result.copies.ok
    )
    out = out or Path(f"dual_{p}_4.off")
    orientable, signs = check_orientable(result.dual_complex.cells)
    out.write_text(
        meshio.off_text(
            result.dual_complex,
            orientation=signs if orientable else None,
            precision=precision,
        )
    )
    prism_path = out.with_suffix(".prism.off")
    prism_path.write_text(
        meshio.off_text(result.prism_complex, precision=precision)
    )
    fig_path = out.with_suffix(".png")
    render_complex(result.dual_complex, fig_path)
    prism_fig = out.with_suffix(".prism.png")
    render_complex(result.prism_complex, prism_fig)
    report_path = out.with_suffix(".report.json")
    payload = {
        "config": {
            "p": p,
            "eps": rational_str(result.prism.eps),
            "M": rational_str(result.prism.M),
            "delta": rational_str(result.prism.delta),
            "precision": precision,
            "seed": seed,
        },
        "projected_polytope": {
            "vertices": len(result.hull.points),
            "facets": len(result.hull.facets),
            "f_vector": list(result.lattice.f_vector()),
        },
        "poset_copies": {
            "ok": result.copies.ok,
            "missing": {
                name: [meshio.key_text(f) for f in faces]
                for name, faces in result.copies.missing.items()
            },
        },
        "window_vertex": meshio.key_text(result.window_vertex),
        "dual_coords_r4": {
            meshio.key_text(g): meshio.vec_json(x)
            for g, x in result.dual_coords4.items()
        },
        "prism_certificates": meshio.report_json(result.report),
    }
    report_path.write_text(meshio.dump_json(payload))
    d0 = len(result.dual_complex.cells.vertices())
    d2 = result.dual_complex.cells.face_count
    click.echo(f"dual surface: {d0} vertices, {d2} quads (Schlegel image)")
    click.echo(
        f"projected polytope: {len(result.hull.points)} vertices, "
        f"{len(result.hull.facets)} facets; "
        f"surface poset copies: {'ok' if result.copies.ok else 'MISSING'}"
    )
    click.echo(f"wrote {out}, {prism_path}, {report_path}")
    click.echo(f"wrote {fig_path} and {prism_fig}")
    if not verified:
        raise click.ClickException("dual pipeline verification failed")


@main.command()
@click.option("--p", type=int, required=True)
@click.option("--verify/--no-verify", default=None,
              help="force or skip the sampled-realization check "
                   "(default: run it for p <= 6)")
def moduli(p: int, verify: bool | None) -> None:
    """Realization-space lower bounds from the affine support set."""
    _require(p >= 3, "p must be at least 3 (need an actual polygon)")
    if verify is None:
        verify = p <= 6
    report = moduli_bounds(p, verify=verify)
    click.echo(report.render_table())
    if not verify:
        click.echo("(support-set checks skipped; pass --verify to run them)")
    if report.support is not None and not report.support.ok:
        raise click.ClickException("support-set verification failed")


if __name__ == "__main__":
    main()
