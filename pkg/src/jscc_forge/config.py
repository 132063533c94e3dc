#!/usr/bin/python3
"""
Configuration Module

A centralized configuration class for numerical tolerances, search budgets,
simulation caps and output settings.
"""

import logging
from typing import Any, Dict, List


class Config:
    """Configuration class for the toolkit."""

    # Application settings
    APP_NAME = "jscc-forge"
    APP_TAGLINE = "Source-Channel Rate Toolkit"

    # Probability settings
    PROB_TOLERANCE = 1e-9  # normalization tolerance on ingestion
    ZERO_CELL_THRESHOLD = 1e-15  # cells below are exact zeros for support graphs
    STRUCTURE_TOLERANCE = 1e-9  # default for structure_check "holds"

    # Region search settings
    GRID_RESOLUTION = 0.05
    REFINE_STEPS = 200
    REFINE_RESTARTS = 8
    REFINE_SEED = 20071015
    CANDIDATE_CAP = 2_000_000
    BISECTION_TOLERANCE = 1e-4
    MAX_TIME_SHARING = 4  # |Q| <= 4
    PRUNE_TOLERANCE = 1e-12
    BLAHUT_ARIMOTO_THRESHOLD = 1e-12
    BLAHUT_ARIMOTO_MAX_ITER = 10_000

    # Verdict settings
    BOUNDARY_TOLERANCE = 1e-6  # bits
    WITNESS_GRID_RESOLUTION = 0.25  # source-conditioned witness search
    WITNESS_CANDIDATE_CAP = 50_000
    WITNESS_STARTS = 4
    STRONG_INTERFERENCE_GRID = 0.1
    STRONG_INTERFERENCE_RESTARTS = 8
    TWOWAY_GRID_RESOLUTION = 0.02

    # Simulation settings
    CODEBOOK_CAP = 2**16
    BIN_CAP = 2**16
    SEQUENCE_ENUMERATION_CAP = 2**20  # |S|^m for separation-scheme bins
    TYPICAL_SET_ENUMERATION_CAP = 2**24  # |X|^n for typical_set_size_check
    CODEBOOK_EPSILON = 0.25
    TYPICALITY_SCALE = 1.5  # delta = gamma = scale / sqrt(m)
    MAX_TYPICALITY_SLACK = 0.9
    DEFAULT_TRIALS = 200
    DEFAULT_SEED = 1
    PAIR_ELEMENT_BUDGET = 4_000_000  # max array elements per decoder pair block

    # Output settings
    DECIMALS = 6
    CSV_LINE_TERMINATOR = "\n"

    # Model file settings
    MODEL_FORMAT_VERSION = 1
    MODEL_PACKAGE_DIR = "models"

    # Logging settings
    DEFAULT_LOG_LEVEL = logging.WARNING
    DEBUG_LOG_LEVEL = logging.DEBUG
    LOG_FILE = "jscc-forge.log"
    LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

    @classmethod
    def get_probability_settings(cls) -> Dict[str, Any]:
        """
        Get all probability tolerance settings.

        Returns:
            Dictionary containing probability settings
        """
        return {
            "PROB_TOLERANCE": cls.PROB_TOLERANCE,
            "ZERO_CELL_THRESHOLD": cls.ZERO_CELL_THRESHOLD,
            "STRUCTURE_TOLERANCE": cls.STRUCTURE_TOLERANCE,
        }

    @classmethod
    def get_region_settings(cls) -> Dict[str, Any]:
        """
        Get all region search settings.

        Returns:
            Dictionary containing region search settings
        """
        return {
            "GRID_RESOLUTION": cls.GRID_RESOLUTION,
            "REFINE_STEPS": cls.REFINE_STEPS,
            "REFINE_RESTARTS": cls.REFINE_RESTARTS,
            "REFINE_SEED": cls.REFINE_SEED,
            "CANDIDATE_CAP": cls.CANDIDATE_CAP,
            "BISECTION_TOLERANCE": cls.BISECTION_TOLERANCE,
            "MAX_TIME_SHARING": cls.MAX_TIME_SHARING,
            "PRUNE_TOLERANCE": cls.PRUNE_TOLERANCE,
            "BLAHUT_ARIMOTO_THRESHOLD": cls.BLAHUT_ARIMOTO_THRESHOLD,
            "BLAHUT_ARIMOTO_MAX_ITER": cls.BLAHUT_ARIMOTO_MAX_ITER,
        }

    @classmethod
    def get_verdict_settings(cls) -> Dict[str, Any]:
        """
        Get all verdict and witness search settings.

        Returns:
            Dictionary containing verdict settings
        """
        return {
            "BOUNDARY_TOLERANCE": cls.BOUNDARY_TOLERANCE,
            "WITNESS_GRID_RESOLUTION": cls.WITNESS_GRID_RESOLUTION,
            "WITNESS_CANDIDATE_CAP": cls.WITNESS_CANDIDATE_CAP,
            "WITNESS_STARTS": cls.WITNESS_STARTS,
            "STRONG_INTERFERENCE_GRID": cls.STRONG_INTERFERENCE_GRID,
            "STRONG_INTERFERENCE_RESTARTS": cls.STRONG_INTERFERENCE_RESTARTS,
            "TWOWAY_GRID_RESOLUTION": cls.TWOWAY_GRID_RESOLUTION,
        }

    @classmethod
    def get_simulation_settings(cls) -> Dict[str, Any]:
        """
        Get all simulation settings.

        Returns:
            Dictionary containing simulation settings
        """
        return {
            "CODEBOOK_CAP": cls.CODEBOOK_CAP,
            "BIN_CAP": cls.BIN_CAP,
            "SEQUENCE_ENUMERATION_CAP": cls.SEQUENCE_ENUMERATION_CAP,
            "TYPICAL_SET_ENUMERATION_CAP": cls.TYPICAL_SET_ENUMERATION_CAP,
            "CODEBOOK_EPSILON": cls.CODEBOOK_EPSILON,
            "TYPICALITY_SCALE": cls.TYPICALITY_SCALE,
            "MAX_TYPICALITY_SLACK": cls.MAX_TYPICALITY_SLACK,
            "DEFAULT_TRIALS": cls.DEFAULT_TRIALS,
            "DEFAULT_SEED": cls.DEFAULT_SEED,
            "PAIR_ELEMENT_BUDGET": cls.PAIR_ELEMENT_BUDGET,
        }

    @classmethod
    def get_output_settings(cls) -> Dict[str, Any]:
        """
        Get all output formatting settings.

        Returns:
            Dictionary containing output settings
        """
        return {
            "DECIMALS": cls.DECIMALS,
            "CSV_LINE_TERMINATOR": cls.CSV_LINE_TERMINATOR,
            "MODEL_FORMAT_VERSION": cls.MODEL_FORMAT_VERSION,
        }

    @classmethod
    def get_logging_settings(cls) -> Dict[str, Any]:
        """
        Get all logging settings.

        Returns:
            Dictionary containing logging settings
        """
        return {
            "DEFAULT_LOG_LEVEL": cls.DEFAULT_LOG_LEVEL,
            "DEBUG_LOG_LEVEL": cls.DEBUG_LOG_LEVEL,
            "LOG_FILE": cls.LOG_FILE,
            "LOG_FORMAT": cls.LOG_FORMAT,
        }

    @classmethod
    def get_all_settings(cls) -> Dict[str, Any]:
        """
        Get all configuration settings organized by category.

        Returns:
            Dictionary containing all configuration settings
        """
        return {
            "probability": cls.get_probability_settings(),
            "region": cls.get_region_settings(),
            "verdict": cls.get_verdict_settings(),
            "simulation": cls.get_simulation_settings(),
            "output": cls.get_output_settings(),
            "logging": cls.get_logging_settings(),
        }

    @classmethod
    def validate_settings(cls) -> bool:
        """
        Validate that all configuration settings are within acceptable ranges.

        Returns:
            True if all settings are valid, False otherwise
        """
        try:
            if not 0 < cls.PROB_TOLERANCE < 1e-3:
                return False
            if not 0 <= cls.ZERO_CELL_THRESHOLD < cls.PROB_TOLERANCE:
                return False

            if not 0 < cls.GRID_RESOLUTION <= 0.5:
                return False
            if cls.REFINE_STEPS < 0 or cls.REFINE_RESTARTS < 0:
                return False
            if cls.CANDIDATE_CAP <= 0:
                return False
            if cls.BISECTION_TOLERANCE <= 0:
                return False
            if cls.MAX_TIME_SHARING < 1:
                return False

            if cls.BOUNDARY_TOLERANCE < 0:
                return False

            if cls.CODEBOOK_CAP <= 1 or cls.BIN_CAP <= 1:
                return False
            if cls.CODEBOOK_EPSILON <= 0:
                return False
            if not 0 < cls.MAX_TYPICALITY_SLACK < 1:
                return False
            if cls.DEFAULT_TRIALS < 1:
                return False

            if cls.DECIMALS < 0:
                return False

            return True

        except Exception:
            return False

    @classmethod
    def get_setting(cls, name: str) -> Any:
        """
        Get a specific configuration setting by name.

        Args:
            name: Name of the setting to retrieve

        Returns:
            Value of the setting

        Raises:
            AttributeError: If the setting doesn't exist
        """
        if hasattr(cls, name):
            return getattr(cls, name)
        else:
            raise AttributeError(f"Configuration setting '{name}' not found")

    @classmethod
    def list_settings(cls) -> List[str]:
        """
        Get a list of all configuration setting names.

        Returns:
            List of setting names
        """
        return [
            attr
            for attr in dir(cls)
            if not attr.startswith("_") and not callable(getattr(cls, attr))
        ]
