"""Ordered fan-out channel for server log events.

One publisher side (the server), any number of subscribers (stdout echo,
the HTTP log stream). Publishing holds the bus lock while appending to
every subscriber queue, so all subscribers observe the same order. Each
subscriber has a bounded buffer: on overflow the oldest events are
dropped and a single marker event takes their place.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable


@dataclass(frozen=True)
class LogEvent:
    ts: float
    level: str  # 'notice' | 'error' | 'marker'
    line: str


class LogSubscription:
    def __init__(self, capacity: int):
        self.capacity = capacity
        self._events: deque[LogEvent] = deque()
        self._dropped = 0
        self._cond = threading.Condition()
        self.closed = False

    def _push(self, event: LogEvent) -> None:
        with self._cond:
            if len(self._events) >= self.capacity:
                self._events.popleft()
                self._dropped += 1
            self._events.append(event)
            self._cond.notify()

    def get(self, timeout: float | None = None) -> LogEvent | None:
        """Next event in order, or None on timeout/close.

        A drop marker is delivered in place of any lost events.
        """
        with self._cond:
            if not self._events and not self.closed:
                self._cond.wait(timeout)
            if self._dropped:
                n, self._dropped = self._dropped, 0
                return LogEvent(time.time(), "marker", f"[{n} log event(s) dropped]")
            if self._events:
                return self._events.popleft()
            return None

    def close(self) -> None:
        with self._cond:
            self.closed = True
            self._cond.notify_all()


class LogBus:
    def __init__(self, echo: Callable[[LogEvent], None] | None = None, history: int = 1000):
        self._lock = threading.Lock()
        self._subscribers: list[LogSubscription] = []
        self._history: deque[LogEvent] = deque(maxlen=history)
        self._last_ts = 0.0
        self.echo = echo

    def publish(self, level: str, line: str) -> LogEvent:
        with self._lock:
            ts = max(time.time(), self._last_ts)
            self._last_ts = ts
            event = LogEvent(ts, level, line)
            self._history.append(event)
            for sub in self._subscribers:
                sub._push(event)
        if self.echo is not None:
            self.echo(event)
        return event

    def notice(self, line: str) -> LogEvent:
        return self.publish("notice", line)

    def error(self, line: str) -> LogEvent:
        return self.publish("error", line)

    def subscribe(self, capacity: int = 1000, tail: int = 0) -> LogSubscription:
        """New subscription; `tail` preloads up to that many recent events."""
        sub = LogSubscription(capacity)
        with self._lock:
            if tail > 0:
                for event in list(self._history)[-tail:]:
                    sub._push(event)
            self._subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: LogSubscription) -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)
        sub.close()
