"""
In-memory store for pydantic models, keyed by name.
"""
from typing import Dict, Generic, List, Optional, TypeVar

T = TypeVar('T')


class InMemoryDatabase(Generic[T]):
    """Generic in-memory storage keyed by a unique name."""

    def __init__(self):
        self._storage: Dict[str, T] = {}

    def create(self, key: str, item: T) -> T:
        """Store a new item under ``key``."""
        if key in self._storage:
            raise ValueError(f"Item with key {key} already exists")
        self._storage[key] = item
        return item

    def get(self, key: str) -> Optional[T]:
        """Get an item by its key."""
        return self._storage.get(key)

    def get_all(self) -> List[T]:
        """Get all items, in insertion order."""
        return list(self._storage.values())

    def keys(self) -> List[str]:
        return list(self._storage)

    def exists(self, key: str) -> bool:
        return key in self._storage

    def clear(self):
        """Clear all items from the database."""
        self._storage.clear()
