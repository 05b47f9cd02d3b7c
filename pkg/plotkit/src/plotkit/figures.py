"""Two-panel weighted-graph figures from graph-export files.

The left panel draws the real part of the graph matrix, the right panel
the imaginary part (as i Im Z), over the same node layout. Within a
panel every weight is a plain real number, so the phase alphabet splits
cleanly: +1/-1 for the real panel, +i/-i for the imaginary one. A mode
pair above threshold in both panels has a genuinely mixed phase; it is
drawn gray in both and flagged in the returned record.

Rendering never mutates global state; the only side effect is the output
image. Tests assert on the returned drawn-edge lists, not on pixels.
"""

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from matplotlib.figure import Figure
from matplotlib.lines import Line2D
from matplotlib.patches import Circle, FancyArrowPatch

from .exports import ExportData, load_export

DEFAULT_THRESHOLD = 0.1
DEFAULT_THICKNESS = 3.0
DEFAULT_COLORS = {
    "+1": "red",
    "-1": "blue",
    "+i": "purple",
    "-i": "green",
    "mixed": "gray",
}

_LOOP_RADIUS = 0.13
_LOOP_LIFT = 0.24


@dataclass(frozen=True)
class FigureSpec:
    """How to draw an export: node layout, edge cutoff, colors, width scale.

    layout is "auto" (pick from export metadata), "ladder", "circular",
    or "grid:RxC" (bare "grid" reads rows/cols from the metadata).
    Edge width is thickness * |weight|; entries with |weight| below
    threshold are not drawn.
    """

    layout: str = "auto"
    threshold: float = DEFAULT_THRESHOLD
    colors: dict = field(default_factory=lambda: dict(DEFAULT_COLORS))
    thickness: float = DEFAULT_THICKNESS


@dataclass(frozen=True)
class DrawnFigure:
    """What render() actually drew, for programmatic inspection."""

    re_edges: tuple[tuple[int, int, float], ...]
    im_edges: tuple[tuple[int, int, float], ...]
    mixed: tuple[tuple[int, int], ...]
    layout: str
    positions: dict
    output: str


def ladder_positions(n):
    """Two-rail layout for the staged ladder scenario on n = p - 1 modes.

    The rails follow the scenario's wiring: starting from mode 1, the
    next top-rail mode alternately completes the sums p - 2 and p + 2,
    and each bottom-rail mode is the top partner's complement to p.
    """
    if n < 2 or n % 2:
        raise ValueError(f"ladder layout needs an even mode count, got {n}")
    p = n + 1
    top = [1]
    for step in range(n // 2 - 1):
        nxt = (p - 2 if step % 2 == 0 else p + 2) - top[-1]
        top.append(nxt)
    bottom = [p - k for k in top]
    if sorted(top + bottom) != list(range(1, n + 1)):
        raise ValueError(f"ladder layout does not fit {n} modes")
    positions = {}
    for col, (t, b) in enumerate(zip(top, bottom)):
        positions[t] = (float(col), 1.0)
        positions[b] = (float(col), 0.0)
    return positions


def grid_positions(rows, cols):
    """Row-major r x c layout; mode i*cols + j + 1 sits at column j, row i."""
    if rows < 1 or cols < 1:
        raise ValueError("grid layout needs positive rows and cols")
    return {
        i * cols + j + 1: (float(j), float(rows - 1 - i))
        for i in range(rows)
        for j in range(cols)
    }


def circular_positions(n):
    if n < 1:
        raise ValueError("circular layout needs at least one mode")
    radius = max(1.0, 0.22 * n)
    return {
        k + 1: (radius * math.cos(2 * math.pi * k / n),
                radius * math.sin(2 * math.pi * k / n))
        for k in range(n)
    }


def _auto_layout(data: ExportData):
    scenario = data.metadata.get("scenario")
    if isinstance(scenario, dict):
        kind = scenario.get("kind")
        if kind == "ladder":
            return "ladder"
        if kind == "lattice":
            rows, cols = scenario.get("rows"), scenario.get("cols")
            if isinstance(rows, int) and isinstance(cols, int):
                return f"grid:{rows}x{cols}"
    return "circular"


def resolve_layout(layout, data: ExportData):
    """Turn a layout request into (name, positions) for this export."""
    if layout == "auto":
        layout = _auto_layout(data)
    if layout == "ladder":
        return "ladder", ladder_positions(data.n)
    if layout == "circular":
        return "circular", circular_positions(data.n)
    if layout == "grid" or layout.startswith("grid:"):
        if layout == "grid":
            resolved = _auto_layout(data)
            if not resolved.startswith("grid:"):
                raise ValueError(
                    "grid layout needs rows and cols (use grid:RxC)")
            layout = resolved
        try:
            rows, cols = (int(part) for part in layout[5:].split("x"))
        except ValueError:
            raise ValueError(f"malformed grid layout: {layout!r}") from None
        if rows * cols != data.n:
            raise ValueError(
                f"grid layout {rows}x{cols} does not match {data.n} modes")
        return "grid", grid_positions(rows, cols)
    raise ValueError(f"unknown layout: {layout!r}")


def _panel_color(weight, pair, mixed, classes, colors):
    if pair in mixed:
        return colors["mixed"]
    return colors[classes[0] if weight > 0 else classes[1]]


def _draw_panel(ax, title, edges, positions, mixed, classes, colors,
                thickness):
    for i, j, weight in edges:
        color = _panel_color(weight, (i, j), mixed, classes, colors)
        width = thickness * abs(weight)
        if i == j:
            x, y = positions[i]
            ax.add_patch(Circle((x, y + _LOOP_LIFT), _LOOP_RADIUS,
                                fill=False, lw=width, color=color, zorder=1))
        else:
            ax.add_patch(FancyArrowPatch(
                positions[i], positions[j], arrowstyle="-",
                connectionstyle="arc3,rad=0.12", lw=width, color=color,
                shrinkA=0.0, shrinkB=0.0, zorder=1))
    xs = [x for x, _ in positions.values()]
    ys = [y for _, y in positions.values()]
    ax.plot(xs, ys, "o", color="black", ms=4, zorder=3)
    for label, (x, y) in positions.items():
        ax.text(x, y - 0.12, str(label), ha="center", va="top",
                fontsize=8, zorder=4)
    pad = 0.7
    ax.set_xlim(min(xs) - pad, max(xs) + pad)
    ax.set_ylim(min(ys) - pad, max(ys) + pad + _LOOP_LIFT)
    ax.set_aspect("equal")
    ax.set_axis_off()
    ax.set_title(title)


def render(export_path, spec: FigureSpec, out_path):
    """Draw an export as a two-panel figure; returns what was drawn."""
    data = load_export(export_path)
    layout_name, positions = resolve_layout(spec.layout, data)
    re_edges = tuple(e for e in data.re_edges if abs(e[2]) >= spec.threshold)
    im_edges = tuple(e for e in data.im_edges if abs(e[2]) >= spec.threshold)
    mixed = tuple(sorted(
        {(i, j) for i, j, _ in re_edges} & {(i, j) for i, j, _ in im_edges}))

    fig = Figure(figsize=(11.0, 5.0))
    axes = fig.subplots(1, 2)
    _draw_panel(axes[0], "Re(Z)", re_edges, positions, mixed,
                ("+1", "-1"), spec.colors, spec.thickness)
    _draw_panel(axes[1], "i Im(Z)", im_edges, positions, mixed,
                ("+i", "-i"), spec.colors, spec.thickness)
    handles = [Line2D([0], [0], color=spec.colors[name], lw=2, label=name)
               for name in ("+1", "-1", "+i", "-i", "mixed")]
    fig.legend(handles=handles, loc="lower center", ncol=5, frameon=False,
               fontsize=9, bbox_to_anchor=(0.5, 0.04))
    fig.text(0.5, 0.01,
             f"edge width proportional to |weight|; entries with "
             f"|weight| < {spec.threshold:g} not drawn; modes are 1-based",
             ha="center", fontsize=8, color="dimgray")
    fig.savefig(out_path, dpi=150)
    return DrawnFigure(re_edges, im_edges, mixed, layout_name, positions,
                       str(out_path))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render a graph export as a two-panel Re/Im figure.")
    parser.add_argument("export", help="path to a graph-export JSON file")
    parser.add_argument("--layout", default="auto",
                        help="auto | ladder | grid[:RxC] | circular")
    parser.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                        help="hide entries with |weight| below this")
    parser.add_argument("--out", default=None,
                        help="output image path (default: export stem + .png)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = args.out or str(Path(args.export).with_suffix(".png"))
    spec = FigureSpec(layout=args.layout, threshold=args.threshold)
    try:
        drawn = render(args.export, spec, out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {drawn.output}: layout {drawn.layout}, "
          f"{len(drawn.re_edges)} real and {len(drawn.im_edges)} imaginary "
          f"entries drawn, {len(drawn.mixed)} mixed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
