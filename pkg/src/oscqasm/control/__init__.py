"""HTTP control surface (status, config, start/stop, log stream)."""

from .api import CONTROL_HOST, CONTROL_PORT, create_app, find_dashboard_dir

__all__ = ["create_app", "find_dashboard_dir", "CONTROL_HOST", "CONTROL_PORT"]
