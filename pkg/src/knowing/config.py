"""Run configuration.

Every command reads one `Config`. Defaults live on the dataclass, environment
variables with the `RK_` prefix override them, and command-line flags override the
environment. The configuration is written into certificate headers, so a certificate
names everything needed to reproduce it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping

from knowing.coding import CODING_VERSION
from knowing.compmodel.primitives import PRIMITIVE_VERSION
from knowing.exceptions import ConfigError


OUTPUT_FORMATS = ("text", "records")

ENV_PREFIX = "RK_"

BUDGETS = (
    "prove_budget",
    "entails_budget",
    "knows_budget",
    "run_budget",
    "theorem_budget",
)


@dataclass(frozen=True)
class Config:
    """Budgets, seeds and pins for one run.

    Attributes:
        prove_budget (int): Step budget of `prove_valid`.
        entails_budget (int): Step budget of `entails`.
        knows_budget (int): Step budget of knowledge queries.
        run_budget (int): Interpreter step budget of `run` and `trace`.
        theorem_budget (int): Step budget of `enumerate_theorems` and schema dumps.
        eval_bound (int): Quantifier search bound of the evaluator.
        seed (int): Seed of pattern structures and sampled audits.
        dovetail_k (int): Proof steps between two axiom fetches.
        coding_version (str): Godel coding pin.
        primitive_version (str): Primitive table pin.
        cache_path (Path, optional): Knowledge cache file.
        output_format (str): Either "text" or "records".
    """

    prove_budget: int = 1_000_000
    entails_budget: int = 1_000_000
    knows_budget: int = 1_000_000
    run_budget: int = 10_000
    theorem_budget: int = 100_000
    eval_bound: int = 25
    seed: int = 0
    dovetail_k: int = 8
    coding_version: str = CODING_VERSION
    primitive_version: str = PRIMITIVE_VERSION
    cache_path: Path | None = None
    output_format: str = "text"

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError("output_format", self.output_format, OUTPUT_FORMATS)

        for name in BUDGETS:
            if getattr(self, name) <= 0:
                raise ConfigError(name, str(getattr(self, name)))

        if self.dovetail_k <= 0:
            raise ConfigError("dovetail_k", str(self.dovetail_k))

        # Pins must match the running build
        if self.coding_version != CODING_VERSION:
            raise ConfigError("coding_version", self.coding_version, (CODING_VERSION,))

        if self.primitive_version != PRIMITIVE_VERSION:
            raise ConfigError(
                "primitive_version", self.primitive_version, (PRIMITIVE_VERSION,)
            )

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> Config:
        """Build a configuration from `RK_*` variables.

        Args:
            environ (Mapping[str, str], optional): Variables to read. Defaults to
                `os.environ`.

        Raises:
            ConfigError: If a variable cannot be read as its setting's type.
        """
        environ = os.environ if environ is None else environ
        overrides: dict[str, object] = {}

        for setting in fields(cls):
            key = ENV_PREFIX + setting.name.upper()

            # The cache path is RK_CACHE, the output format RK_FORMAT
            if setting.name == "cache_path":
                key = f"{ENV_PREFIX}CACHE"
            elif setting.name == "output_format":
                key = f"{ENV_PREFIX}FORMAT"

            if key not in environ:
                continue

            raw = environ[key]

            if setting.type == "int":
                try:
                    overrides[setting.name] = int(raw)
                except ValueError as exc:
                    raise ConfigError(setting.name, raw) from exc
            elif setting.name == "cache_path":
                overrides[setting.name] = Path(raw)
            else:
                overrides[setting.name] = raw

        return cls(**overrides)  # type: ignore[arg-type]

    def override(self, **changes) -> Config:
        """Return a copy with the given settings replaced; `None` keeps a setting."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def describe(self) -> str:
        """Render the configuration as one `name=value` line."""
        return " ".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self))
