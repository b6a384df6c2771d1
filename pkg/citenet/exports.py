"""
Plot-ready tables and network files.

Every writer goes through `write_csv` so identical inputs give
byte-identical files: fixed column order, `%.12g` floats, blank cells for
undefined values and Unix line endings.
"""

import json

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.12g"


def percent_label(q):
    """0.5 -> '50', 0.01 -> '1', 0.995 -> '99.5'."""
    return f"{q * 100:.10g}"


def write_csv(frame, path):
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    return path


def nodes_frame(network):
    return pd.DataFrame({"id": np.arange(network.n_nodes), "cohort": network.cohort})


def edges_frame(network):
    return pd.DataFrame({"citing_id": network.citing, "cited_id": network.ref_ids})


def write_network(network, nodes_path, edges_path):
    write_csv(nodes_frame(network), nodes_path)
    write_csv(edges_frame(network), edges_path)
    return nodes_path, edges_path


def write_records(network, path):
    """JSONL publication records, one object per line in id order."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in network.to_records():
            handle.write(
                json.dumps({"id": record.id, "year": record.year, "refs": list(record.refs)})
                + "\n"
            )
    return path


def metrics_frame(rows, percentiles, thresholds, top_q):
    columns = (
        ["t", "n", "gini", "gini_cited", "hhi", "mu_LN", "sigma_LN"]
        + [f"F{c}" for c in thresholds]
        + [f"C{percent_label(q)}" for q in percentiles]
        + [f"top{percent_label(top_q)}_share"]
    )
    records = []
    for row in rows:
        records.append(
            [
                row.cohort,
                row.n,
                row.gini,
                row.gini_cited_only,
                row.hhi,
                row.mu_LN,
                row.sigma_LN,
                *(row.uncited_fracs[c] for c in thresholds),
                *(row.percentiles[q] for q in percentiles),
                row.top_share,
            ]
        )
    frame = pd.DataFrame(records, columns=columns)
    # None cells become NaN so every statistic column is float formatted
    return frame.astype({name: (np.int64 if name in ("t", "n") else float) for name in columns})


def refage_frame(distributions):
    records = [row for dist in distributions for row in dist.rows()]
    return pd.DataFrame(
        records, columns=["window_start", "window_end", "delta_r", "pdf", "tail_cdf"]
    )


def memory_frame(series):
    """F(delta_r <= delta | t) per citing period, one column per delta."""
    deltas = sorted(series)
    frame = pd.DataFrame({"t": list(series[deltas[0]].t)}) if deltas else pd.DataFrame()
    for delta in deltas:
        frame[f"F{delta}"] = list(series[delta].values)
    return frame


def supply_frame(supply):
    return pd.DataFrame(
        list(supply.rows()),
        columns=["t", "n", "references", "redirected", "citations", "redirect_mean"],
    )


def intervals_frame(rows, deltas):
    columns = ["window_start", "window_end", "mean_delta", "f_recent", "f_mid", "f_classic"] + [
        f"F{delta}" for delta in deltas
    ]
    frame = pd.DataFrame(
        [
            [row.window_start, row.window_end, row.mean_delta, row.recent, row.mid, row.classic]
            + [row.within[delta] for delta in deltas]
            for row in rows
        ],
        columns=columns,
    )
    return frame.astype({name: float for name in columns[2:]})


def careers_frame(metrics):
    frame = pd.DataFrame(
        [
            [m.researcher_id, m.y0, m.h, m.h_deflated, m.rho_H, m.c_total, m.c_total_deflated, m.rho_C]
            for m in metrics
        ],
        columns=["researcher", "y0", "h", "hD", "rhoH", "C", "CD", "rhoC"],
    )
    return frame.astype({"rhoH": float, "C": float, "CD": float, "rhoC": float})


def write_json(payload, path):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path
