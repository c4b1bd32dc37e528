# Thermodynamic ledgers for autonomous quantum systems
# Copyright (C) 2024 the autothermo authors

# This program is free software; you can redistribute it and/or modify it under
# the terms of the GNU General Public License as published by the Free Software
# Foundation; either version 2 of the License, or (at your option) any later
# version.

# This program is distributed in the hope that it will be useful, but WITHOUT
# ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or
# FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public License for more
# details.

# You should have received a copy of the GNU General Public License along with
# this program; if not, see https://www.gnu.org/licenses/gpl-2.0.html


"""Inputs, especially loading of scenario configurations

Configurations are nested dictionaries. Records with ``key/subkey/0`` paths
address nested items, integer components index lists.
"""

import copy
import csv
import json
import math
from collections.abc import Mapping
from pathlib import Path

import yaml


class ConfigurationError(ValueError):
    """Invalid configuration, *path* names the offending key (if known)"""

    def __init__(self, message, path=None):
        if path:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path


def text_to_value(arg):
    """Convert text to int, float, boolean, or JSON if possible

    Values which are not strings are returned as is, an empty string is None,
    and text which cannot be converted is returned unchanged.
    """
    # pylint: disable=too-many-return-statements
    if not isinstance(arg, str):
        return arg
    arg = arg.strip()
    if not arg:
        return None
    try:
        return int(arg)
    except ValueError:
        pass
    try:
        return float(arg)
    except ValueError:
        pass
    if arg in ["true", "True", "TRUE"]:
        return True
    if arg in ["false", "False", "FALSE"]:
        return False
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        return arg


def update_nested_dict_by_dict(dictionary, update):
    """Recursively update nested dictionary by another nested dictionary

    Lists in the update are merged item by item into existing lists when the
    update list was created from a record (None items leave entries as they are).
    """
    for key, value in update.items():
        current = dictionary.get(key)
        if isinstance(value, Mapping):
            if not isinstance(current, Mapping):
                current = {}
            dictionary[key] = update_nested_dict_by_dict(current, value)
        elif isinstance(value, _RecordList) and isinstance(current, list):
            dictionary[key] = _merge_lists(current, value)
        else:
            dictionary[key] = _plain(value)
    return dictionary


class _RecordList(list):
    """List created from an indexed record path"""


def _plain(value):
    if isinstance(value, _RecordList):
        return [_plain(item) for item in value]
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    return value


def _merge_lists(current, update):
    merged = list(current)
    for index, value in enumerate(update):
        if value is None:
            continue
        if index >= len(merged):
            merged.extend([None] * (index + 1 - len(merged)))
        if isinstance(value, Mapping):
            base = merged[index] if isinstance(merged[index], Mapping) else {}
            merged[index] = update_nested_dict_by_dict(copy.deepcopy(base), value)
        else:
            merged[index] = _plain(value)
    return merged


def _as_index(key):
    try:
        return int(key)
    except (TypeError, ValueError):
        return None


def update_nested_dict_by_item(container, keys, value):
    """Place *value* at the position given by *keys* in a nested container

    Integer keys index lists which are extended as needed.
    Non-container intermediate values are replaced by dictionaries.
    """
    key = keys[0]
    index = _as_index(key) if isinstance(container, list) else None
    if isinstance(container, list):
        if index is None or index < 0:
            raise ConfigurationError(f"'{key}' is not a list index")
        if index >= len(container):
            container.extend([None] * (index + 1 - len(container)))
        key = index
    if len(keys) == 1:
        container[key] = value
        return
    current = container[key] if isinstance(container, list) else container.get(key)
    if not isinstance(current, (dict, list)):
        current = _RecordList() if _as_index(keys[1]) is not None else {}
        container[key] = current
    update_nested_dict_by_item(current, keys[1:], value)


def record_to_nested_dictionary(record):
    """Convert dictionary with key/subkey/subsubkey keys into a nested dictionary"""
    out = {}
    for path, value in record.items():
        if not isinstance(path, str):
            raise ConfigurationError(
                f"Record keys need to be strings, not {path} ({type(path).__name__})"
            )
        update_nested_dict_by_item(out, path.split("/"), value)
    return out


def update_config(config, record):
    """Update a copy of *config* by a dictionary with key/subkey/0 keys"""
    config = copy.deepcopy(config)
    update = record_to_nested_dictionary(record)
    update_nested_dict_by_dict(config, update)
    return config


def get_by_path(config, path):
    """Return the value at a key/subkey/0 path or raise ConfigurationError"""
    value = config
    for key in path.split("/"):
        try:
            if isinstance(value, list):
                value = value[int(key)]
            else:
                value = value[key]
        except (KeyError, IndexError, ValueError, TypeError):
            raise ConfigurationError("No such configuration item", path=path) from None
    return value


def load_configuration_yaml_from_text(text):
    """Return configuration dictionary from YAML in a string"""
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as error:
        raise ConfigurationError(_yaml_problem(error)) from error


def _yaml_problem(error, filename=None):
    mark = getattr(error, "problem_mark", None)
    place = str(filename) if filename else "text"
    if mark is not None:
        place = f"{place}, line {mark.line + 1}, column {mark.column + 1}"
    problem = getattr(error, "problem", None) or str(error)
    return f"Cannot parse YAML ({place}): {problem}"


def validate_key(arg):
    """Return a stripped key or None for empty keys and keys with spaces

    Keys with spaces are treated as headings in a key-value table.
    """
    if isinstance(arg, str):
        arg = arg.strip()
        if not arg or " " in arg:
            return None
        return arg
    if arg is None:
        return None
    if isinstance(arg, float) and math.isnan(arg):
        return None
    return str(arg)


def load_config_csv(filename):
    """Read configuration from a two-column key-value CSV table

    Rows without keys or with invalid keys are ignored, see :func:`validate_key`.
    Values are converted by :func:`text_to_value`.
    """
    table = {}
    with open(filename, newline="", encoding="utf-8") as file:
        for row in csv.reader(file):
            if len(row) < 2:
                continue
            key = validate_key(row[0])
            if key:
                table[key] = text_to_value(row[1])
    return _plain(record_to_nested_dictionary(table))


def load_one_configuration(filename):
    """Get the configuration from a YAML, JSON, or CSV file

    The format is decided based on the file extension.
    """
    filename = Path(filename)
    suffix = filename.suffix.lower()
    try:
        if suffix == ".json":
            with open(filename, encoding="utf-8") as file:
                try:
                    return json.load(file)
                except json.JSONDecodeError as error:
                    raise ConfigurationError(
                        f"Cannot parse JSON ({filename}, line {error.lineno}, "
                        f"column {error.colno}): {error.msg}"
                    ) from error
        if suffix in [".yaml", ".yml"]:
            with open(filename, encoding="utf-8") as file:
                try:
                    return yaml.safe_load(file)
                except yaml.YAMLError as error:
                    raise ConfigurationError(_yaml_problem(error, filename)) from error
        if suffix == ".csv":
            return load_config_csv(filename)
    except OSError as error:
        raise ConfigurationError(f"Cannot read {filename}: {error.strerror}") from error
    raise ConfigurationError(f"Unknown file extension (file: {filename})")


def resolve_included_files(dictionary, base_file_name=None):
    """Replace {include_file: {file_name: ...}} items by the file content"""
    for key, value in dictionary.items():
        if not isinstance(value, dict):
            continue
        if len(value) == 1 and "include_file" in value:
            nested_file = Path(value["include_file"]["file_name"])
            if base_file_name and not nested_file.is_absolute():
                nested_file = Path(base_file_name).parent / nested_file
            dictionary[key] = load_one_configuration(nested_file)
        else:
            resolve_included_files(value, base_file_name)


def load_configuration(filename):
    """Get the configuration from a YAML, JSON, or CSV file

    Any item given as ``include_file`` is replaced by the content of that file
    (path relative to the including file).
    """
    config = load_one_configuration(filename)
    if not isinstance(config, dict):
        raise ConfigurationError(f"Configuration in {filename} is not a mapping")
    resolve_included_files(config, base_file_name=filename)
    return config


def add_dict_config_to_table(table, value, keys=None):
    """Add a nested dictionary to a table represented by a mapping

    This is meant for internal use, if possible, use :func:`dict_config_to_table`.
    """
    if keys is None:
        keys = []
    if isinstance(value, Mapping):
        for nested_key, nested_value in value.items():
            add_dict_config_to_table(table, nested_value, keys + [str(nested_key)])
    else:
        table["/".join(keys)] = value


def dict_config_to_table(value):
    """Convert a nested dictionary to a flat key/subkey table"""
    table = {}
    add_dict_config_to_table(table, value)
    return table


def load_scenario_table(filename):
    """Load a CSV file with one scenario per row into a list of dictionaries

    Column names are key/subkey paths, cell values are converted by
    :func:`text_to_value`. Empty cells are left out of the row.
    """
    table = []
    with open(filename, newline="", encoding="utf-8") as file:
        for row in csv.DictReader(file):
            record = {}
            for key, value in row.items():
                value = text_to_value(value)
                if value is not None:
                    record[key] = value
            table.append(record)
    return table
