"""Parsing of the benchmark harness's CSV output.

Two layouts are accepted: per-repeat records (columns mean_est, var_est,
rel_err_mean, rel_err_std, ...) and per-group summaries (columns
mse_mean, mse_var, ...). Anything else is rejected with the missing
column named.
"""

RECORD_COLUMNS = ("problem", "method", "N", "mean_est", "var_est",
                  "rel_err_mean", "rel_err_std")
SUMMARY_COLUMNS = ("problem", "method", "N", "rel_err_mean_avg",
                   "rel_err_std_avg", "mse_mean", "mse_var")


class SchemaError(ValueError):
    """The CSV does not match the harness schema."""


def _typed(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_records(path):
    """Parse a harness CSV; returns (kind, rows) with kind records|summary."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = lines[0].split(",")
    if "mse_mean" in header:
        kind, required = "summary", SUMMARY_COLUMNS
    else:
        kind, required = "records", RECORD_COLUMNS
    missing = [c for c in required if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing column {missing[0]!r}")
    rows = []
    for line in lines[1:]:
        values = line.split(",")
        if len(values) != len(header):
            raise SchemaError(
                f"{path}: row has {len(values)} fields, header has {len(header)}"
            )
        rows.append({k: _typed(v) for k, v in zip(header, values)})
    if not rows:
        raise SchemaError(f"{path}: header-only file, nothing to plot")
    return kind, rows
