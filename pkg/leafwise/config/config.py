import collections.abc
import copy
import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

load_dotenv()

_here = Path(__file__).parent
DEFAULTS_PATH = (_here / 'defaults.yaml').resolve()

LEAFWISE_THREADS = max(1, int(os.getenv('LEAFWISE_THREADS', '1') or 1))
LEAFWISE_CONFIG = os.getenv('LEAFWISE_CONFIG')
LEAFWISE_DB_PATH = os.getenv('LEAFWISE_DB_PATH')


def read_yaml_config(file_path: str) -> dict:
    """Reads and returns the contents of a YAML file as dictionary"""
    with open(file_path, 'r', encoding='utf-8') as file:
        contents = yaml.safe_load(file)
    return contents or {}


def write_yaml_config(file_path: str, data: dict):
    """Writes a dictionary to a YAML file"""
    with open(file_path, 'w', encoding='utf-8') as file:
        yaml.safe_dump(data, file, sort_keys=True)


def update_dict(d, u):
    for k, v in u.items():
        if isinstance(v, collections.abc.Mapping):
            d[k] = update_dict(d.get(k, {}), v)
        else:
            d[k] = v
    return d


def load_settings(user_config_path: str | None = None) -> dict:
    """Packaged defaults, overlaid with the user YAML file (argument first, then LEAFWISE_CONFIG)"""
    settings = read_yaml_config(DEFAULTS_PATH)
    user_path = user_config_path or LEAFWISE_CONFIG
    if user_path:
        if not os.path.exists(user_path):
            raise FileNotFoundError(f"Configuration file '{user_path}' does not exist")
        settings = update_dict(settings, read_yaml_config(user_path))
    settings.setdefault('runtime', {})['threads'] = LEAFWISE_THREADS
    return settings


_SETTINGS = load_settings()


def get_setting(key: str, settings: dict | None = None):
    """Dotted lookup, e.g. get_setting('cohomeq.blowup_factor')"""
    value = settings if settings is not None else _SETTINGS
    for part in key.split('.'):
        if not isinstance(value, dict) or part not in value:
            raise KeyError(f"Setting '{key}' is not defined")
        value = value[part]
    return value


def default_settings() -> dict:
    return copy.deepcopy(_SETTINGS)


def apply_settings(user_config_path: str | None = None, overrides: dict | None = None) -> dict:
    """Reloads the process-wide settings in place and returns a resolved copy"""
    settings = load_settings(user_config_path)
    if overrides:
        settings = update_dict(settings, overrides)
    _SETTINGS.clear()
    _SETTINGS.update(settings)
    return default_settings()
