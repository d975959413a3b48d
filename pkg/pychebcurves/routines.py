"""
General helpers shared by the rest of the package: YAML/JSON
serialization, logging setup, and the exception types raised across
modules.
"""

import json
import logging
from pathlib import Path
from typing import Any, Union, Dict, Optional

import joblib
import ruamel.yaml as yaml

# safe loader and dumper shared by the YAML helpers
__yaml_obj__ = yaml.YAML(typ="safe")

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


class FieldMismatchError(ValueError):
    """Raised when elements or polynomials of different fields are combined."""


class CapExceededError(RuntimeError):
    """Raised when an enumeration or extension search would exceed its cap."""


class InvariantBreach(RuntimeError):
    """
    Raised when a computed result contradicts a guaranteed mathematical
    fact, e.g. a stabilizing map that cannot be lifted, or two independent
    maximality verdicts that disagree.
    """


class HypothesisError(ValueError):
    """Raised when the arithmetic hypotheses of a check are not met."""


def read_json(json_filepath: Union[str, Path]) -> Dict[Any, Any]:
    """
    Read a report written by `dump_json`.

    Parameters
    ----------
    json_filepath : str
        Path to a JSON report

    Returns
    -------
    dict
        The report contents
    """
    with open(json_filepath, "r") as read_file:
        return json.load(read_file)


def to_json(json_dict: Dict[Any, Any]) -> str:
    """
    Canonical JSON text for a report: sorted keys and fixed indentation,
    so that equal inputs always produce byte-identical output.
    """
    return json.dumps(json_dict, indent=4, sort_keys=True)


def dump_json(json_filepath: Union[str, Path], json_dict: Dict[Any, Any]):
    """
    Write a report as canonical JSON, newline terminated.

    Parameters
    ----------
    json_filepath : str
        Destination path; an existing file is overwritten
    json_dict : dict
        Report contents
    """
    with open(json_filepath, "w") as write_file:
        write_file.write(to_json(json_dict))
        write_file.write("\n")


def read_yaml(yaml_filepath: Union[str, Path]) -> Dict[Any, Any]:
    """
    Read a flat YAML mapping such as a run configuration. An empty file
    reads as an empty dict.

    Parameters
    ----------
    yaml_filepath : str
        Path to the YAML file

    Returns
    -------
    dict
        The mapping in the file
    """
    with open(yaml_filepath) as read_file:
        yaml_data = __yaml_obj__.load(read_file)
    return {} if yaml_data is None else yaml_data


def dump_yaml(yaml_filepath: Union[str, Path], yaml_dict: Dict[Any, Any]):
    """
    Write a mapping as YAML with the safe dumper.

    Parameters
    ----------
    yaml_filepath : str
        Destination path; an existing file is overwritten
    yaml_dict : dict
        Mapping of plain Python values
    """
    with open(yaml_filepath, "w") as write_file:
        __yaml_obj__.dump(yaml_dict, write_file)


def save_obj(obj: Any, filepath: Union[str, Path], **kwargs):
    """
    Pickle `obj` to disk with `joblib.dump`, gzip-compressed unless other
    settings are passed as keyword arguments.

    Parameters
    ----------
    obj
        Any picklable object, e.g. the cells of a grid scan
    filepath : str
        Destination path; an existing file is overwritten
    """
    settings = {"compress": ("gzip", 3)}
    settings.update(kwargs)
    joblib.dump(obj, str(filepath), **settings)


def read_obj(filepath: Union[str, Path]) -> Any:
    """Load an object written by `save_obj`."""
    return joblib.load(str(filepath))


def init_logging(
    level: Union[str, int] = "WARNING", log_file: Optional[Union[str, Path]] = None
) -> logging.Logger:
    """
    Set up the handlers for the package logger. A stream handler is always
    attached; if `log_file` is given, everything at `level` and above is
    also written there. Calling this again replaces the previous handlers.

    Parameters
    ----------
    level : str or int
        Logging level name or number
    log_file : str, optional
        Path of a log file to write in addition to stderr

    Returns
    -------
    logging.Logger
        The configured `pychebcurves` logger
    """
    logging.captureWarnings(True)
    logger = logging.getLogger("pychebcurves")
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    handlers = [logging.StreamHandler()]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file, mode="w"))
    for handler in handlers:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler.setLevel(level)
        logger.addHandler(handler)
    return logger
