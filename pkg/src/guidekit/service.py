"""Live-mode driver: one engine task, an ordered command queue, socket fan-out.

Every mutation (state update, interaction) is submitted as a closure and
executed inside the engine task, which serializes them, runs the immediate
guidance tick they trigger, and only then resolves the caller's future.
Clients therefore observe the effects of their own request as soon as the
HTTP response lands. Rapid concurrent updates drain as one batch and
coalesce into a single immediate tick.
"""

from __future__ import annotations

import asyncio
from typing import Any, Callable, Optional

from .clock import MonotonicClock
from .engine.config import EngineConfig
from .engine.core import GuidanceEngine
from .engine.events import to_wire, wire_hello
from .engine.suggestions import IdGenerator
from .specs.model import Bundle
from .values import canon_json


class EngineService:
    def __init__(
        self,
        bundle: Bundle,
        config: Optional[EngineConfig] = None,
        log_sink: Optional[Callable[[str], None]] = None,
    ):
        self.clock = MonotonicClock()
        self.engine = GuidanceEngine(
            bundle, config=config, clock=self.clock, ids=IdGenerator.for_live_run(),
        )
        self._queue: asyncio.Queue = asyncio.Queue()
        self._task: Optional[asyncio.Task] = None
        self._subscribers: list[asyncio.Queue] = []
        self._log_sink = log_sink
        self.engine.log.subscribe(self._fan_out)

    # -- event fan-out --

    def _fan_out(self, event: dict) -> None:
        if self._log_sink is not None:
            self._log_sink(canon_json(event))
        message = to_wire(event)
        if message is not None:
            for queue in self._subscribers:
                queue.put_nowait(message)

    def subscribe_socket(self) -> tuple[asyncio.Queue, dict]:
        """Register a websocket subscriber; returns its queue and the hello
        message. Built in one synchronous block so no emission can slip
        between the pending snapshot and the registration."""
        queue: asyncio.Queue = asyncio.Queue()
        hello = wire_hello(
            {
                "engine": "guidekit",
                "revision": float(self.engine.state.revision),
                "active_strategies": list(self.engine.active),
            },
            self.engine.pending_payloads(),
        )
        self._subscribers.append(queue)
        return queue, hello

    def unsubscribe(self, queue: asyncio.Queue) -> None:
        if queue in self._subscribers:
            self._subscribers.remove(queue)

    # -- lifecycle --

    async def start(self) -> None:
        self.engine.start()
        self.engine.tick_phase(self.clock.now())
        self._task = asyncio.create_task(self._run(), name="guidekit-engine")

    async def stop(self) -> None:
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass
            self._task = None

    async def _run(self) -> None:
        while True:
            self.engine.tick_phase(self.clock.now())
            timeout = max(self.engine.next_due() - self.clock.now(), 0.0)
            try:
                first = await asyncio.wait_for(self._queue.get(), timeout)
            except asyncio.TimeoutError:
                continue
            batch = [first]
            while not self._queue.empty():
                batch.append(self._queue.get_nowait())
            outcomes: list[tuple[asyncio.Future, Optional[Any], Optional[BaseException]]] = []
            for fn, future in batch:
                try:
                    outcomes.append((future, fn(), None))
                except Exception as err:  # typed errors flow back to the handler
                    outcomes.append((future, None, err))
            self.engine.tick_phase(self.clock.now())
            for future, value, err in outcomes:
                if future.cancelled():
                    continue
                if err is None:
                    future.set_result(value)
                else:
                    future.set_exception(err)

    async def submit(self, fn: Callable[[], Any]) -> Any:
        """Run a closure inside the engine task and await its result."""
        future = asyncio.get_running_loop().create_future()
        await self._queue.put((fn, future))
        return await future
