"""Embeddable NGSI-LD context-broker subset for tests and demos."""

from .server import BrokerSimServer
from .store import EntityStore, LogEntry

__all__ = ["BrokerSimServer", "EntityStore", "LogEntry"]
