"""Configuration model for the aligned-drawing tools."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict

from aligned_drawing.models.geometry import to_rat


@dataclass
class ToolConfig:
    """Settings read from config/aligned_config.yaml."""

    max_halvings: int = 40
    search_box_exponent: int = 10
    search_trials: int = 1000
    search_seed: int = 7
    svg_digits: int = 12
    svg_scale: int = 40
    parallel_gap: Fraction = Fraction(1)

    def __post_init__(self):
        """Validate ranges."""
        self.parallel_gap = to_rat(self.parallel_gap)
        positive = {
            "lift.max_halvings": self.max_halvings,
            "search.trials": self.search_trials,
            "svg.digits": self.svg_digits,
            "svg.scale": self.svg_scale,
        }
        for key, value in positive.items():
            if value < 1:
                raise ValueError(f"{key} must be positive, got {value}")
        if not 1 <= self.search_box_exponent <= 60:
            raise ValueError(f"search.box_exponent out of range: {self.search_box_exponent}")
        if self.parallel_gap <= 0:
            raise ValueError(f"parallel.gap must be positive, got {self.parallel_gap}")

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "ToolConfig":
        """Create config from the nested YAML layout."""
        lift = config.get("lift") or {}
        search = config.get("search") or {}
        svg = config.get("svg") or {}
        parallel = config.get("parallel") or {}
        defaults = cls()
        return cls(
            max_halvings=int(lift.get("max_halvings", defaults.max_halvings)),
            search_box_exponent=int(search.get("box_exponent", defaults.search_box_exponent)),
            search_trials=int(search.get("trials", defaults.search_trials)),
            search_seed=int(search.get("seed", defaults.search_seed)),
            svg_digits=int(svg.get("digits", defaults.svg_digits)),
            svg_scale=int(svg.get("scale", defaults.svg_scale)),
            parallel_gap=to_rat(str(parallel.get("gap", defaults.parallel_gap))),
        )
