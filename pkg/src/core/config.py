"""Runtime settings for the image-space MPPI simulator.

Experiment parameters never come from here: they live in the experiment
config file (see ``src.harness.config``). These settings only control
logging and how much concurrency the harness may use.
"""

import os
import logging
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict
from decouple import config

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Settings(BaseSettings):
    """Process-level settings loaded from environment variables or .env."""

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    # Environment: development, ci, production
    environment: str = config("ENVIRONMENT", default="development")

    # Logging Configuration
    log_level: str = config("LOG_LEVEL", default="INFO")
    log_file: Optional[str] = config("LOG_FILE", default=None)

    # Worker threads for concurrent episodes; results never depend on it
    max_workers: int = config("MAX_WORKERS", default=1, cast=int)

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        self._validate_environment()

    def _validate_environment(self):
        """Validate runtime configuration."""
        if self.max_workers < 1:
            logger.error(f"MAX_WORKERS must be >= 1, got {self.max_workers}")
            raise ValueError("MAX_WORKERS must be a positive integer")

        if not isinstance(logging.getLevelName(self.log_level.upper()), int):
            raise ValueError(f"Unknown LOG_LEVEL {self.log_level!r}")


# Global settings instance
app_config = Settings()


def get_app_config() -> Settings:
    """Get application settings."""
    return app_config


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Configure root logging once from the runtime settings."""
    level_name = (level or app_config.log_level).upper()
    handlers: list[logging.Handler] = [logging.StreamHandler()]

    target = log_file or app_config.log_file
    if target:
        os.makedirs(os.path.dirname(os.path.abspath(target)), exist_ok=True)
        handlers.append(logging.FileHandler(target))

    logging.basicConfig(level=level_name, format=LOG_FORMAT, handlers=handlers, force=True)
    logger.debug(f"Logging configured at {level_name} (environment={app_config.environment})")
