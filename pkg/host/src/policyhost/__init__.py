"""External policy host: loads a code policy and serves the wire protocol."""

from .server import load_agent_class, serve

__all__ = ["load_agent_class", "serve"]
