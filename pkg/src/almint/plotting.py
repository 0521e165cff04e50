"""Figure rendering for the structural reports.

Figures accompany the JSON output; they are never byte-golden, so layout
tweaks here do not affect report stability.
"""

from __future__ import annotations


def render_analysis_figure(report: dict, path: str) -> None:
    """Render the degree histogram and component inventory to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax_deg, ax_comp) = plt.subplots(1, 2, figsize=(9.0, 3.6))

    hist = report["degree_histogram"]
    degrees = sorted(int(d) for d in hist)
    ax_deg.bar([str(d) for d in degrees], [hist[str(d)] for d in degrees],
               color="#33658a")
    ax_deg.set_xlabel("disjoint degree")
    ax_deg.set_ylabel("edge instances")
    ax_deg.set_title("disjoint-degree histogram")

    counts = dict(report["components"]["counts"])
    isolated = report["components"]["isolated_instances"]
    if isolated:
        counts["isolated"] = isolated
    labels = sorted(counts)
    ax_comp.bar(labels, [counts[lbl] for lbl in labels], color="#758e4f")
    ax_comp.set_xlabel("component shape")
    ax_comp.set_ylabel("count")
    ax_comp.set_title("disjointness-graph components")
    ax_comp.tick_params(axis="x", rotation=30)

    fig.suptitle(
        f"{report['uniformity']}-uniform, {report['total_instances']} instances",
        fontsize=10,
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_search_figure(report: dict, path: str) -> None:
    """Render extremal-family sizes from a search report to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    families = report["extremal_families"]
    sizes = [fam["total_instances"] for fam in families]
    ax.bar(range(len(sizes)), sizes, color="#33658a")
    ax.axhline(report["max_edges"], color="#f26419", linestyle="--",
               label=f"maximum {report['max_edges']}")
    ax.set_xlabel("extremal family (canonical order)")
    ax.set_ylabel("edge instances")
    ax.set_title("extremal families found")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
