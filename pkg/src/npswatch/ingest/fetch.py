"""Polite fetch scheduling.

Hosts run independently up to a concurrency cap; within a host,
requests are serialized with a minimum gap, and failures retry with
exponential backoff until the retry budget runs out.  Time is a
pluggable clock, simulated by default, so schedules are deterministic
and instantly testable; live fetching is an explicit opt-in.
"""

from __future__ import annotations

import datetime as dt
import heapq
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional
from urllib.parse import urlsplit

__all__ = [
    "FetchEntry",
    "FetchLog",
    "FetchPolicy",
    "HostUnreachable",
    "SimulatedClock",
    "WallClock",
    "schedule_fetch",
]


class HostUnreachable(RuntimeError):
    """Raised on demand for urls that exhausted their retry budget."""


@dataclass(frozen=True)
class FetchPolicy:
    min_delay_per_host: float = 2.0  # seconds
    max_concurrent_hosts: int = 4
    max_retries: int = 2
    revisit_interval: dt.timedelta = dt.timedelta(days=7)

    def __post_init__(self):
        if self.min_delay_per_host <= 0:
            raise ValueError("min_delay_per_host must be positive")
        if self.max_concurrent_hosts < 1:
            raise ValueError("max_concurrent_hosts must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


class SimulatedClock:
    def __init__(self, start: float = 0.0):
        self._now = start

    def now(self) -> float:
        return self._now

    def advance_to(self, t: float) -> None:
        if t > self._now:
            self._now = t


class WallClock:
    def now(self) -> float:
        return time.monotonic()

    def advance_to(self, t: float) -> None:
        delay = t - self.now()
        if delay > 0:
            time.sleep(delay)


@dataclass(frozen=True)
class FetchEntry:
    at: float
    url: str
    host: str
    attempt: int
    status: str  # "ok" | "error" | "planned"


@dataclass
class FetchLog:
    entries: list[FetchEntry] = field(default_factory=list)
    failed: dict[str, str] = field(default_factory=dict)

    def by_host(self) -> dict[str, list[FetchEntry]]:
        out: dict[str, list[FetchEntry]] = {}
        for e in self.entries:
            out.setdefault(e.host, []).append(e)
        return out

    def min_same_host_gap(self) -> float:
        gaps = [
            b.at - a.at
            for entries in self.by_host().values()
            for a, b in zip(entries, entries[1:])
        ]
        return min(gaps) if gaps else float("inf")

    def raise_for_failures(self) -> None:
        if self.failed:
            raise HostUnreachable("; ".join(f"{u}: {e}" for u, e in sorted(self.failed.items())))


class _HostState:
    __slots__ = ("host", "order", "queue", "next_ok", "seq")

    def __init__(self, host: str, order: int):
        self.host = host
        self.order = order
        self.queue: list = []  # heap of (ready_time, seq, url, attempt)
        self.next_ok = 0.0
        self.seq = 0

    def put(self, ready: float, url: str, attempt: int) -> None:
        heapq.heappush(self.queue, (ready, self.seq, url, attempt))
        self.seq += 1

    def feasible(self) -> float:
        return max(self.next_ok, self.queue[0][0])


def schedule_fetch(
    urls: Iterable[str],
    policy: FetchPolicy,
    fetcher: Optional[Callable[[str], object]] = None,
    clock=None,
) -> FetchLog:
    """Execute (or, without a fetcher, plan) fetches politely.

    Per-host request gaps never fall below policy.min_delay_per_host; a
    url whose fetcher keeps raising is retried with exponentially grown
    gaps and, after max_retries extra attempts, recorded in log.failed.
    The run always continues past failures.
    """
    clock = clock if clock is not None else SimulatedClock()
    hosts: dict[str, _HostState] = {}
    for url in urls:
        host = urlsplit(url).hostname
        if not host:
            raise ValueError(f"url {url!r} has no host")
        state = hosts.get(host)
        if state is None:
            state = hosts[host] = _HostState(host, len(hosts))
        state.put(0.0, url, 1)

    waiting = deque(hosts.values())
    active: list[_HostState] = []
    log = FetchLog()

    while waiting or any(h.queue for h in active):
        while len(active) < policy.max_concurrent_hosts and waiting:
            h = waiting.popleft()
            # late activation: a host entering the rotation can not
            # backdate its first request
            h.next_ok = max(h.next_ok, clock.now())
            active.append(h)
        ready = [h for h in active if h.queue]
        h = min(ready, key=lambda s: (s.feasible(), s.order))
        t = h.feasible()
        clock.advance_to(t)
        _, _, url, attempt = heapq.heappop(h.queue)

        if fetcher is None:
            log.entries.append(FetchEntry(t, url, h.host, attempt, "planned"))
        else:
            try:
                fetcher(url)
            except Exception as exc:
                log.entries.append(FetchEntry(t, url, h.host, attempt, "error"))
                if attempt > policy.max_retries:
                    log.failed[url] = f"unreachable after {attempt} attempts: {exc}"
                else:
                    backoff = policy.min_delay_per_host * (2 ** (attempt - 1))
                    h.put(t + backoff, url, attempt + 1)
            else:
                log.entries.append(FetchEntry(t, url, h.host, attempt, "ok"))
        h.next_ok = t + policy.min_delay_per_host

        if not h.queue:
            active.remove(h)
    return log
