# config_loader.py
import json
import logging
import os
from functools import lru_cache

logger = logging.getLogger(__name__)

# Profilerne ligger ved siden af denne fil, uanset hvilken mappe kommandoen køres fra.
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
CONFIG_DIR = os.path.join(PROJECT_ROOT, 'config')


@lru_cache(maxsize=None)
def load_config(file_path):
    """Indlæser en JSON-konfigurationsfil fra config-mappen."""
    full_path = os.path.join(CONFIG_DIR, file_path)

    if not os.path.exists(full_path):
        logger.error(f"Configuration file not found: {full_path}")
        logger.info(f"Check that the 'config' directory exists in the project root: {PROJECT_ROOT}")
        return None  # Returner None for at signalere en fejl

    try:
        with open(full_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Could not load JSON file {full_path}: {e}")
        return None


def load_experiment_profiles():
    """Indlæser eksperimentprofilerne (reproduktion, forstyrrelse og sweeps)."""
    return load_config('experiments/profiles.json')
