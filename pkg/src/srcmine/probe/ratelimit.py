"""Token-bucket rate limiter shared by concurrent probe workers."""

import threading
import time


class TokenBucket:
    """At most `capacity` operations per burst, refilled at `refill_per_second`.

    clock/sleeper are injectable so tests can drive time.
    """

    def __init__(self, capacity: int, refill_per_second: float,
                 clock=time.monotonic, sleeper=time.sleep):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if refill_per_second <= 0:
            raise ValueError("refill rate must be positive")
        self.capacity = capacity
        self.refill_per_second = refill_per_second
        self._clock = clock
        self._sleeper = sleeper
        self._tokens = float(capacity)
        self._updated = clock()
        self._lock = threading.Lock()

    def _refill(self):
        now = self._clock()
        self._tokens = min(
            float(self.capacity),
            self._tokens + (now - self._updated) * self.refill_per_second,
        )
        self._updated = now

    # float rounding can strand the level a few ulps below 1.0; treat that
    # as a full token and never compute a wait too small to advance a clock
    _EPSILON = 1e-9
    _MIN_WAIT = 1e-6

    def acquire(self):
        """Block until one token is available, then consume it."""
        while True:
            with self._lock:
                self._refill()
                if self._tokens >= 1.0 - self._EPSILON:
                    self._tokens = max(0.0, self._tokens - 1.0)
                    return
                wait = (1.0 - self._tokens) / self.refill_per_second
            self._sleeper(max(wait, self._MIN_WAIT))

    def try_acquire(self) -> bool:
        with self._lock:
            self._refill()
            if self._tokens >= 1.0 - self._EPSILON:
                self._tokens = max(0.0, self._tokens - 1.0)
                return True
            return False
