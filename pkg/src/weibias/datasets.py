"""Bundled example datasets and the delimited-text reader used by the CLI.

File format: one record per line, columns ``value[,indicator]`` with an
optional ``value,delta`` header and optional metadata comments of the form
``# key=value`` (recognised key: ``censor_time``). A missing indicator column
means complete data. Censored files either carry the censor_time metadata or
it is taken as the (single) value shared by all censored records.
"""

from importlib import resources

import numpy as np

from .distribution import CensoredSample

__all__ = ["load_sample", "parse_sample", "load_type1_voltages", "load_type2_voltages",
           "load_recidivism_subsample"]


class DataFileError(ValueError):
    """Malformed data file; message carries the offending line number."""


def parse_sample(text: str, source: str = "<string>") -> CensoredSample:
    """Parse delimited sample text into a CensoredSample."""
    values = []
    indicators = []
    censor_time = None
    header_allowed = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, val = body.partition("=")
                if key.strip() == "censor_time":
                    try:
                        censor_time = float(val)
                    except ValueError:
                        raise DataFileError(f"{source}:{lineno}: bad censor_time {val!r}") from None
            continue
        fields = [f.strip() for f in line.split(",")]
        if header_allowed:
            header_allowed = False
            try:
                float(fields[0])
            except ValueError:
                if fields[0].lower() == "value" and len(fields) <= 2:
                    continue
                raise DataFileError(f"{source}:{lineno}: unrecognized header {line!r}") from None
        if len(fields) not in (1, 2):
            raise DataFileError(f"{source}:{lineno}: expected 1 or 2 columns, got {len(fields)}")
        try:
            value = float(fields[0])
        except ValueError:
            raise DataFileError(f"{source}:{lineno}: bad value {fields[0]!r}") from None
        if len(fields) == 2:
            if fields[1] not in ("0", "1"):
                raise DataFileError(f"{source}:{lineno}: indicator must be 0 or 1, got {fields[1]!r}")
            indicators.append(int(fields[1]))
        else:
            indicators.append(1)
        values.append(value)

    if not values:
        raise DataFileError(f"{source}: no data records found")
    values = np.asarray(values, dtype=float)
    indicators = np.asarray(indicators, dtype=np.int64)
    if censor_time is None and np.any(indicators == 0):
        censored_values = np.unique(values[indicators == 0])
        if censored_values.size > 1:
            raise DataFileError(
                f"{source}: censored records at multiple values {censored_values.tolist()} "
                "but no '# censor_time=' metadata; type I censoring needs a single threshold"
            )
        censor_time = float(censored_values[0])
    try:
        return CensoredSample(values=values, indicators=indicators, censor_time=censor_time)
    except ValueError as exc:
        raise DataFileError(f"{source}: {exc}") from None


def load_sample(path) -> CensoredSample:
    """Read a sample from a data file on disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sample(fh.read(), source=str(path))


def _load_bundled(name: str) -> CensoredSample:
    text = resources.files("weibias.data").joinpath(name).read_text(encoding="utf-8")
    return parse_sample(text, source=name)


def load_type1_voltages() -> CensoredSample:
    """Failure voltages (kV/mm) of 20 type-1 electrical cable insulation specimens."""
    return _load_bundled("type1_voltages.csv")


def load_type2_voltages() -> CensoredSample:
    """Failure voltages (kV/mm) of 20 type-2 electrical cable insulation specimens."""
    return _load_bundled("type2_voltages.csv")


def load_recidivism_subsample() -> CensoredSample:
    """20 release-follow-up times (weeks): 5 observed events, 15 censored at week 52."""
    return _load_bundled("recidivism_subsample.csv")
