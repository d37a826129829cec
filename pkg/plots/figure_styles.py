"""Per-figure presentation table for the bound-sweep CSVs.

Axis labels always come from the CSV itself (x_name / y_name columns); this
table only adds titles, axis scales and a line-style map keyed by series
name.  No numbers are computed here.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class FigureStyle:
    figure_id: int
    title: str
    series_styles: dict = field(default_factory=dict)
    x_log: bool = False
    y_log: bool = False

    def style_for(self, series: str) -> dict:
        return dict(self.series_styles.get(series, {"linestyle": "-"}))


_LOWER = {"linestyle": "-"}
_UPPER = {"linestyle": "--"}
_TANAKA = {"linestyle": "-."}
_BASELINE = {"linestyle": ":", "color": "black"}
_MEMBER = {"linestyle": "-", "linewidth": 0.8, "alpha": 0.6}

FIGURE_STYLES = {
    1: FigureStyle(1, "Noiseless capacity bounds vs users",
                   {"lower": _LOWER, "upper": _UPPER}),
    2: FigureStyle(2, "Lower-bound family and envelope vs users",
                   {"family_member": _MEMBER, "lower_envelope": _LOWER}),
    3: FigureStyle(3, "Capacity bounds vs users",
                   {"lower_envelope": _LOWER, "conjectured_upper": _UPPER}),
    4: FigureStyle(4, "Capacity bounds vs Eb/N0",
                   {"lower_envelope": _LOWER, "conjectured_upper": _UPPER}),
    5: FigureStyle(5, "Asymptotic bounds vs Eb/N0 (beta = 0.5)",
                   {"asympt_lower": _LOWER, "asympt_upper": _UPPER,
                    "tanaka": _TANAKA, "bpsk_actual": _BASELINE}),
    6: FigureStyle(6, "Asymptotic bounds vs Eb/N0 (beta = 1)",
                   {"asympt_lower": _LOWER, "asympt_upper": _UPPER,
                    "tanaka": _TANAKA, "bpsk_actual": _BASELINE}),
    7: FigureStyle(7, "Asymptotic bounds vs Eb/N0 (overloaded)",
                   {"asympt_lower": _LOWER, "asympt_upper": _UPPER,
                    "tanaka": _TANAKA}),
    8: FigureStyle(8, "Finite envelope vs its large-system limit",
                   {"finite_envelope": _LOWER, "asympt_lower": _UPPER}),
    9: FigureStyle(9, "Finite vs extrapolated asymptotic bounds",
                   {"finite_lower": _LOWER, "finite_upper": _UPPER,
                    "asympt_lower": {"linestyle": "-", "alpha": 0.5},
                    "asympt_upper": {"linestyle": "--", "alpha": 0.5},
                    "tanaka": _TANAKA}),
    10: FigureStyle(10, "Finite vs extrapolated asymptotic bounds (high noise)",
                    {"finite_lower": _LOWER, "finite_upper": _UPPER,
                     "asympt_lower": {"linestyle": "-", "alpha": 0.5},
                     "asympt_upper": {"linestyle": "--", "alpha": 0.5},
                     "tanaka": _TANAKA}),
}
