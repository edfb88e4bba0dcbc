"""Matplotlib figure rendering for report payloads.

Figures are written next to the delimited output when --plot is given on
the command line.  Everything renders through the Agg backend so the CLI
works headless; no interactive windows are ever opened.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _new_axes(title):
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    ax.set_title(title)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def ext_figure(payload, path):
    """Bar chart of dim Ext^n against n."""
    dims = {int(k): v for k, v in payload["dims"].items()}
    ns = sorted(dims)
    fig, ax = _new_axes(f"Ext({payload['source']}, {payload['target']})")
    ax.bar(ns, [dims[n] for n in ns], color="#33557a")
    ax.set_xlabel("n")
    ax.set_ylabel("dim Ext^n")
    ax.set_xticks(ns)
    return _save(fig, path)


def cohomology_figure(payload, path):
    dims = {int(k): v for k, v in payload["dims"].items()}
    ns = sorted(dims)
    fig, ax = _new_axes(f"H^n of {payload.get('module', 'A')}")
    ax.bar(ns, [dims[n] for n in ns], color="#557a33")
    ax.set_xlabel("n")
    ax.set_ylabel("dim H^n")
    ax.set_xticks(ns)
    return _save(fig, path)


def dimension_figure(payload, path):
    """Witness layer sizes per level for a pd/gd result."""
    result = payload.get("pd_of_simples", payload)
    layers = result.get("witness_layers", [])
    totals = [sum(layer.values()) for layer in layers]
    fig, ax = _new_axes("free cover multiplicities per level")
    if totals:
        ax.bar(range(len(totals)), totals, color="#7a3355")
    ax.set_xlabel("level")
    ax.set_ylabel("summands of the cover")
    kind = payload.get("kind")
    value = payload.get("value", payload.get("cutoff"))
    ax.annotate(f"{kind}: {value}", xy=(0.98, 0.92), xycoords="axes fraction",
                ha="right")
    return _save(fig, path)


def check_figure(payload, path):
    """Per-trial scatter of the computed quantity against its bound."""
    rows = payload["rows"]
    fig, ax = _new_axes(f"{payload['check']}: {payload['trials']} trials")
    value_keys = [("gd", "bound"), ("gd_B", "bound"),
                  ("pd_tensor_norm", None), ("pd_y", None)]
    plotted = False
    for vk, bk in value_keys:
        if any(vk in r and r.get(vk) is not None for r in rows):
            xs = [r["trial"] for r in rows if r.get(vk) is not None]
            ys = [r[vk] for r in rows if r.get(vk) is not None]
            ax.scatter(xs, ys, s=14, label=vk, color="#33557a")
            if bk and any(bk in r for r in rows):
                bx = [r["trial"] for r in rows if r.get(bk) is not None]
                by = [r[bk] for r in rows if r.get(bk) is not None]
                ax.scatter(bx, by, s=14, marker="x", label=bk, color="#aa5533")
            plotted = True
            break
    if not plotted:
        statuses = [0 if r["status"] == "pass" else 1 for r in rows]
        ax.scatter([r["trial"] for r in rows], statuses, s=14, color="#33557a")
        ax.set_yticks([0, 1], ["pass", "other"])
    ax.set_xlabel("trial")
    ax.legend(loc="best", fontsize=8) if plotted else None
    return _save(fig, path)


def figure_for(command, payload, path):
    """Dispatch on the report command; returns the written path or None."""
    if command == "ext":
        return ext_figure(payload, path)
    if command == "cohomology":
        return cohomology_figure(payload, path)
    if command in ("pd", "gd"):
        return dimension_figure(payload, path)
    if command == "verify":
        return check_figure(payload, path)
    return None
