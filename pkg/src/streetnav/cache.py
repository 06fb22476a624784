"""Request cache for location-keyed provider calls.

Repeated lookups around the same coordinates are the common case while
someone pans in place, so results are memoized under a quantized
lat/lng key. Concurrent misses for one key collapse into a single
upstream fetch; waiters share the result (or the exception).
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from concurrent.futures import Future
from typing import Callable, Hashable, TypeVar

from .geo import GeoPoint

T = TypeVar("T")

_DEFAULT_QUANTUM = 1e-5  # degrees; about a meter of lat


class LocationCache:
    """LRU cache keyed by (kind, quantized point, extras).

    Failures are not cached unless cache_failures is set, so a flaky
    upstream call gets retried on the next request.
    """

    def __init__(self, capacity: int = 4096, quantum: float = _DEFAULT_QUANTUM,
                 cache_failures: bool = False):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.quantum = quantum
        self.cache_failures = cache_failures
        self._lock = threading.Lock()
        self._entries: OrderedDict[Hashable, tuple[bool, object]] = OrderedDict()
        self._inflight: dict[Hashable, Future] = {}
        self.hits = 0
        self.misses = 0

    def _key(self, kind: str, point: GeoPoint, extra: tuple) -> Hashable:
        qlat = math.floor(point.lat / self.quantum)
        qlng = math.floor(point.lng / self.quantum)
        return (kind, qlat, qlng, extra)

    def get_or_fetch(self, kind: str, point: GeoPoint, fetch: Callable[[], T],
                     extra: tuple = ()) -> T:
        key = self._key(kind, point, extra)
        while True:
            with self._lock:
                entry = self._entries.get(key)
                if entry is not None:
                    self._entries.move_to_end(key)
                    self.hits += 1
                    ok, value = entry
                    if ok:
                        return value  # type: ignore[return-value]
                    raise value  # type: ignore[misc]
                fut = self._inflight.get(key)
                if fut is None:
                    fut = Future()
                    self._inflight[key] = fut
                    self.misses += 1
                    break
            # Someone else is already fetching this key; wait on them.
            fut.result()
            # Their result landed in _entries (unless failures are
            # uncached, in which case result() raised); loop to read it.
            if not self.cache_failures:
                with self._lock:
                    if key not in self._entries:
                        continue
        try:
            value = fetch()
        except BaseException as e:
            with self._lock:
                del self._inflight[key]
                if self.cache_failures:
                    self._store(key, (False, e))
            fut.set_exception(e)
            raise
        else:
            with self._lock:
                del self._inflight[key]
                self._store(key, (True, value))
            fut.set_result(value)
            return value

    def _store(self, key: Hashable, entry: tuple[bool, object]) -> None:
        self._entries[key] = entry
        self._entries.move_to_end(key)
        while len(self._entries) > self.capacity:
            self._entries.popitem(last=False)

    def invalidate(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        return len(self._entries)


class CachedProviders:
    """Wraps a world (or live adapters) with a shared LocationCache."""

    def __init__(self, inner, cache: LocationCache | None = None):
        self.inner = inner
        self.cache = cache or LocationCache()

    def get_pano(self, pano_id):
        return self.inner.get_pano(pano_id)

    def panos_in_grid(self, center, half_extent):
        return self.cache.get_or_fetch(
            "panos_in_grid", center,
            lambda: self.inner.panos_in_grid(center, half_extent),
            extra=(half_extent,))

    def nearest_pano(self, p):
        return self.cache.get_or_fetch(
            "nearest_pano", p, lambda: self.inner.nearest_pano(p))

    def places_near(self, origin, radius):
        return self.cache.get_or_fetch(
            "places_near", origin,
            lambda: self.inner.places_near(origin, radius),
            extra=(radius,))

    def roads_in_grid(self, center, half_extent):
        return self.cache.get_or_fetch(
            "roads_in_grid", center,
            lambda: self.inner.roads_in_grid(center, half_extent),
            extra=(half_extent,))

    def search_text(self, query):
        origin = GeoPoint(0.0, 0.0)
        return self.cache.get_or_fetch(
            "search_text", origin, lambda: self.inner.search_text(query),
            extra=(query,))

    def view(self, pano_id, heading):
        return self.inner.view(pano_id, heading)

    def capture_view(self, pano_id, heading, size=640):
        return self.inner.capture_view(pano_id, heading, size)
