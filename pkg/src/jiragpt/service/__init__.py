"""HTTP service and configuration for the query pipeline."""

from jiragpt.service.config import AppConfig, load_config
from jiragpt.service.app import create_app

__all__ = ["AppConfig", "create_app", "load_config"]
