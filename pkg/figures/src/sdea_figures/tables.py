"""Success-ratio table: dimensions as rows, algorithms as columns."""

from __future__ import annotations

from .io import curve_label, read_summaries

# canonical column order for the rate-sweep table; anything else is
# appended alphabetically
_PREFERRED = ("static r=1", "static r=2", "static r=6", "static r=8", "sd", "sasd")


def _column_rank(label: str) -> tuple[int, str]:
    try:
        return _PREFERRED.index(label), label
    except ValueError:
        return len(_PREFERRED), label


def _strip_problem_params(params: str) -> str:
    # drop tokens that belong to the problem (xi=..., m=...); the remaining
    # tokens identify the algorithm configuration
    keep = [tok for tok in params.split() if not tok.startswith(("xi=", "m="))]
    return " ".join(keep)


def table1(summary_csv, out_text) -> str:
    """Render success ratios as a markdown-style table with 5-decimal
    entries; missing cells show an em-dash."""
    rows = read_summaries(summary_csv)
    cells: dict[tuple[int, str], float] = {}
    for row in rows:
        label = curve_label(row["algorithm"], _strip_problem_params(row["params"]))
        cells[(row["n"], label)] = row["success_ratio"]
    ns = sorted({n for n, _ in cells})
    labels = sorted({lab for _, lab in cells}, key=_column_rank)
    header = ["n"] + labels
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    for n in ns:
        row = [str(n)]
        for lab in labels:
            value = cells.get((n, lab))
            row.append("—" if value is None else f"{value:.5f}")
        lines.append("| " + " | ".join(row) + " |")
    text = "\n".join(lines) + "\n"
    if out_text is not None:
        with open(out_text, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
