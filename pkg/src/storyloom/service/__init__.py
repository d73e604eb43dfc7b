from .app import create_app
from .config import ServiceConfig, load_config, register_http_adapter

__all__ = ["create_app", "ServiceConfig", "load_config", "register_http_adapter"]
