"""Rendering of experiment reports as CSV or markdown tables."""
import logging

from src.experiments.convergence import ConvergenceReport, ConvergenceRow
from src.experiments.stability_report import StabilityReport
from src.experiments.step_size import StepSizeTable
from src.utils.config_loader import ConfigLoader
from src.utils.errors import ConfigurationError
from src.utils.validation import parse_fraction

logger = logging.getLogger(__name__)

FORMATS = ("csv", "md")
DIVERGENT = "divergent"
METADATA_KEYS = ("scheme", "problem", "reference", "t_end", "reference_drift")


def _csv_cell(cell):
    if "," in cell or '"' in cell:
        return '"' + cell.replace('"', '""') + '"'
    return cell


class TableRenderer:
    """Formats reports; errors carry TABLE_DIGITS significant digits unless lossless."""
    def __init__(self, fmt="csv", lossless=False):
        fmt = "md" if fmt == "markdown" else fmt
        if fmt not in FORMATS:
            logger.error(f"Unknown output format '{fmt}'")
            raise ConfigurationError(f"unknown format '{fmt}'; valid: csv, md")
        config = ConfigLoader().get_config()
        self.fmt = fmt
        self.lossless = lossless
        self.digits = config["TABLE_DIGITS"]
        self.lossless_digits = config["LOSSLESS_DIGITS"]

    def number(self, value):
        if self.lossless:
            return f"{value:.{self.lossless_digits}g}"
        return f"{value:.{self.digits - 1}e}"

    def step(self, h):
        if self.lossless:
            return f"{h:.{self.lossless_digits}g}"
        inverse = 1.0 / h
        if abs(inverse - round(inverse)) < 1e-9 * inverse and round(inverse) > 1:
            return f"1/{round(inverse)}"
        return f"{h:.{self.digits}g}"

    def rate(self, rate):
        if rate is None:
            return ""
        return f"{rate:.{self.lossless_digits}g}" if self.lossless else f"{rate:.2f}"

    def complex_value(self, z):
        if self.lossless:
            return repr(complex(z))
        return f"{z.real:.{self.digits}g}{z.imag:+.{self.digits}g}j"

    def table(self, header, rows, preamble=()):
        lines = []
        if self.fmt == "csv":
            lines.extend(f"# {line}" for line in preamble)
            lines.append(",".join(header))
            lines.extend(",".join(_csv_cell(cell) for cell in row) for row in rows)
        else:
            if preamble:
                lines.extend(preamble)
                lines.append("")
            lines.append("| " + " | ".join(header) + " |")
            lines.append("|" + "|".join("---" for _ in header) + "|")
            lines.extend("| " + " | ".join(row) + " |" for row in rows)
        return "\n".join(lines) + "\n"

    def convergence(self, report):
        preamble = [
            f"scheme: {report.scheme}",
            f"problem: {report.problem}",
            f"reference: {report.reference}",
            f"t_end: {report.t_end!r}",
        ]
        if report.reference_drift is not None:
            preamble.append(f"reference_drift: {report.reference_drift!r}")
        rows = [
            [self.step(row.h), DIVERGENT if row.divergent else self.number(row.error), self.rate(row.rate)]
            for row in report.rows
        ]
        return self.table(["h", "E", "rate"], rows, preamble)

    def comparison(self, reports):
        """One row per scheme: Method | E(h1) | rate | E(h2) | rate | ..."""
        steps = [row.h for row in reports[0].rows] if reports else []
        header = ["Method"]
        for h in steps:
            header += [f"E({self.step(h)})", "rate"]
        rows = []
        for report in reports:
            if [row.h for row in report.rows] != steps:
                raise ConfigurationError("reports compared side by side need identical step sizes")
            cells = [report.scheme]
            for row in report.rows:
                cells += [DIVERGENT if row.divergent else self.number(row.error), self.rate(row.rate)]
            rows.append(cells)
        preamble = [f"problem: {reports[0].problem}", f"reference: {reports[0].reference}"] if reports else []
        return self.table(header, rows, preamble)

    def step_sizes(self, table):
        header = [table.param_name] + table.columns
        rows = []
        for value in table.values:
            cells = [f"{value:g}" if not self.lossless else repr(value)]
            cells += [table.result(value, column).label(self.lossless) for column in table.columns]
            rows.append(cells)
        return self.table(header, rows, [f"problem: {table.problem}", "largest step size reaching the steady state"])

    def stability(self, report):
        rows = []
        for row in report.rows:
            if row.pole:
                rows.append([self.complex_value(row.z), "pole", ""])
                continue
            printed = "" if row.printed_modulus is None else self.number(row.printed_modulus)
            rows.append([self.complex_value(row.z), self.number(row.modulus), printed])
        preamble = [f"scheme: {report.scheme}"]
        if report.probe is not None:
            probe = report.probe
            preamble.append(
                f"classification: {probe.label()} (max |R| = {probe.sampled_max_modulus:.6g} over "
                f"{probe.sample_count} samples, |R(limit)| = {probe.limit_modulus:.3e})")
        elif report.probe_pole is not None:
            preamble.append(f"classification: pole ({report.probe_pole})")
        return self.table(["z", "|R(z)|", "|R_printed(z)|"], rows, preamble)

    def render(self, report):
        if isinstance(report, ConvergenceReport):
            return self.convergence(report)
        if isinstance(report, (list, tuple)):
            if len(report) == 1:
                return self.convergence(report[0])
            return self.comparison(report)
        if isinstance(report, StepSizeTable):
            return self.step_sizes(report)
        if isinstance(report, StabilityReport):
            return self.stability(report)
        raise ConfigurationError(f"cannot render {type(report).__name__}")


def render_table(report, fmt="csv", lossless=False):
    """Render a convergence report (or list of them), a step-size table or a stability report.

    Args:
        report: ConvergenceReport, list of ConvergenceReport, StepSizeTable or StabilityReport.
        fmt (str): 'csv' or 'md'.
        lossless (bool): 17 significant digits instead of the table precision.

    Returns:
        str: Rendered text.
    """
    return TableRenderer(fmt, lossless).render(report)


def parse_csv_report(text):
    """Parse CSV produced by render_table(ConvergenceReport, 'csv') back to a report.

    The lossless variant round-trips exactly; the rounded one to its printed digits.
    """
    metadata = {}
    rows = []
    header_seen = False
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            if key.strip() in METADATA_KEYS:
                metadata[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line.split(",") != ["h", "E", "rate"]:
                raise ConfigurationError(f"unexpected convergence header '{line}'")
            header_seen = True
            continue
        cells = line.split(",")
        if len(cells) != 3:
            raise ConfigurationError(f"malformed convergence row '{line}'")
        h_text, error_text, rate_text = cells
        divergent = error_text == DIVERGENT
        rows.append(ConvergenceRow(
            h=parse_fraction(h_text),
            error=float("inf") if divergent else float(error_text),
            rate=float(rate_text) if rate_text else None,
            divergent=divergent,
        ))
    if not header_seen:
        raise ConfigurationError("no convergence table found")
    drift = metadata.get("reference_drift")
    return ConvergenceReport(
        scheme=metadata.get("scheme", ""),
        problem=metadata.get("problem", ""),
        reference=metadata.get("reference", ""),
        t_end=float(metadata.get("t_end", "nan")),
        rows=rows,
        reference_drift=float(drift) if drift is not None else None,
    )
