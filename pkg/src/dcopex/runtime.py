"""Deterministic synchronous message-passing simulation with NCLO accounting.

Delivery model: a message sent during step t is delivered at step t+1, FIFO
per channel, never lost.  Step 1 runs every agent's ``on_start`` (its
initial local work); subsequent steps deliver pending messages and run the
receivers.  The run is quiescent when no message is in flight.

NCLO (non-concurrent logic operations): every agent carries a counter;
``charge`` adds local work, and receiving a message first raises the
receiver's counter to the sender's send-time stamp.  Concurrent work
therefore merges by max instead of summing.  The metric contract for what
counts as one operation: one cost-table access, one scalar comparison
(costs, priorities, degrees), or one heap element move.  Additions, set
lookups, and message handling itself are free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import SimulationDeadlock

REQUEST = "REQUEST"
REPLY = "REPLY"


@dataclass(frozen=True)
class Message:
    kind: str
    sender: int
    receiver: int
    payload: Any
    sender_nclo_at_send: int


class SimAgent:
    """Base class for simulated agents; subclasses react to start and messages."""

    def __init__(self, agent_id: int):
        self.id = agent_id
        self.world: World | None = None

    def charge(self, ops: int) -> None:
        assert self.world is not None
        self.world.charge(self.id, ops)

    def send(self, receiver: int, kind: str, payload: Any) -> None:
        assert self.world is not None
        self.world.post(
            Message(
                kind=kind,
                sender=self.id,
                receiver=receiver,
                payload=payload,
                sender_nclo_at_send=self.world.nclo[self.id],
            )
        )

    def on_start(self) -> None:  # pragma: no cover - default no-op
        pass

    def on_message(self, msg: Message) -> None:  # pragma: no cover - default no-op
        pass


def payload_size(payload: Any) -> int:
    """Rough element count of a payload, for the trace log."""
    if payload is None:
        return 0
    if hasattr(payload, "size_hint"):
        return payload.size_hint()
    try:
        return len(payload)
    except TypeError:
        return 1


class World:
    """Holds the agents, the in-flight messages, and the run counters."""

    def __init__(self, agents: Iterable[SimAgent], trace: list | None = None):
        self.agents: dict[int, SimAgent] = {}
        for agent in agents:
            if agent.id in self.agents:
                raise ValueError(f"duplicate agent id {agent.id}")
            agent.world = self
            self.agents[agent.id] = agent
        self.nclo: dict[int, int] = {a: 0 for a in self.agents}
        self.messages_sent = 0
        self.steps = 0
        self._outbox: list[Message] = []
        self._in_flight: list[Message] = []
        self.trace = trace

    def charge(self, agent_id: int, ops: int) -> None:
        if ops < 0:
            raise ValueError("ops must be non-negative")
        self.nclo[agent_id] += ops

    def post(self, msg: Message) -> None:
        if msg.receiver not in self.agents:
            raise ValueError(f"message to unknown agent {msg.receiver}")
        self.messages_sent += 1
        self._outbox.append(msg)

    def on_receive_sync(self, msg: Message) -> None:
        """Raise the receiver's counter to the sender's send-time stamp."""
        if msg.sender_nclo_at_send > self.nclo[msg.receiver]:
            self.nclo[msg.receiver] = msg.sender_nclo_at_send

    @property
    def quiescent(self) -> bool:
        return not self._outbox and not self._in_flight

    def start(self) -> None:
        """Step 1: every agent executes its pending local work."""
        self.steps = 1
        for agent_id in sorted(self.agents):
            self.agents[agent_id].on_start()
        self._in_flight = self._outbox
        self._outbox = []

    def step(self) -> None:
        """Deliver everything sent last step and run the receivers."""
        self.steps += 1
        deliveries = self._in_flight
        self._in_flight = []
        receivers = sorted({m.receiver for m in deliveries})
        for receiver in receivers:
            agent = self.agents[receiver]
            for msg in deliveries:
                if msg.receiver != receiver:
                    continue
                self.on_receive_sync(msg)
                if self.trace is not None:
                    self.trace.append(
                        {
                            "step": self.steps,
                            "kind": msg.kind,
                            "sender": msg.sender,
                            "receiver": msg.receiver,
                            "payload_size": payload_size(msg.payload),
                            "nclo_stamp": msg.sender_nclo_at_send,
                        }
                    )
                agent.on_message(msg)
        self._in_flight = self._outbox
        self._outbox = []

    def run(self, max_steps: int = 10_000) -> int:
        """Start and step until quiescent; returns the number of steps taken."""
        self.start()
        while self._in_flight:
            if self.steps >= max_steps:
                raise SimulationDeadlock(
                    f"no quiescence within {max_steps} steps; this is a protocol defect"
                )
            self.step()
        return self.steps
