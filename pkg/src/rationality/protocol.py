"""Wire protocol for plugging external deciders into simulated sessions.

An external agent is a child process speaking line-delimited JSON over its
standard input and output: one request line per round, one response line
back, UTF-8 both ways.

Request::

    {"round": 3, "prices": [1.0, 2.5], "budget": 100.0,
     "history": [{"prices": [...], "budget": 100.0, "choice": [...]}, ...]}

Response::

    {"choice": [12.5, 35.0]}

``round`` is the 0-based round index and ``history`` lists the session's
prior rounds in order, so the child can be stateless. A malformed line, a
dead process, or a reply slower than the timeout raises
:class:`ProtocolError`; the experiment harness turns that into a failed
session. One child serves one session (round indices restart at 0 every
session), so stateful children never see interleaved sessions.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
from typing import Sequence

from .agents import RoundContext
from .choices import Bundle, ChoiceDataset

__all__ = ["ProtocolError", "ExternalAgentClient", "DEFAULT_TIMEOUT"]

DEFAULT_TIMEOUT = 30.0

_CLOSED = object()  # reader-thread sentinel: child stdout reached EOF


class ProtocolError(RuntimeError):
    """The external agent broke the wire protocol (or never answered)."""


def _history_payload(history: ChoiceDataset | None) -> list[dict]:
    if history is None:
        return []
    return [
        {
            "prices": list(obs.prices),
            "budget": obs.budget,
            "choice": list(obs.choice.quantities),
        }
        for obs in history
    ]


class ExternalAgentClient:
    """Drives one child process for one session.

    Usable as a context manager; :meth:`decide` matches the chooser
    signature that :func:`rationality.agents.run_session` accepts.
    """

    def __init__(self, command: Sequence[str], timeout: float = DEFAULT_TIMEOUT):
        if not command:
            raise ValueError("external agent command must be non-empty")
        if not timeout > 0.0:
            raise ValueError(f"timeout must be positive, got {timeout}")
        self.command = tuple(str(part) for part in command)
        self.timeout = float(timeout)
        try:
            self._child = subprocess.Popen(
                list(self.command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as err:
            raise ProtocolError(f"could not start external agent {self.command!r}: {err}") from err
        self._lines: queue.Queue = queue.Queue()
        reader = threading.Thread(target=self._pump, name="external-agent-reader", daemon=True)
        reader.start()

    def _pump(self) -> None:
        try:
            for line in self._child.stdout:
                self._lines.put(line)
        finally:
            self._lines.put(_CLOSED)

    def decide(self, context: RoundContext) -> Bundle:
        """Send one round's request and parse the child's chosen bundle."""
        request = {
            "round": context.index,
            "prices": list(context.prices),
            "budget": context.budget,
            "history": _history_payload(context.history),
        }
        try:
            self._child.stdin.write(json.dumps(request) + "\n")
            self._child.stdin.flush()
        except (OSError, ValueError) as err:
            raise ProtocolError(f"could not write round {context.index} request: {err}") from err
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            raise ProtocolError(
                f"no response to round {context.index} within {self.timeout} s"
            ) from None
        if line is _CLOSED:
            raise ProtocolError(f"agent process exited before answering round {context.index}")
        return self._parse_choice(line, context)

    def _parse_choice(self, line: str, context: RoundContext) -> Bundle:
        snippet = line.strip()[:120]
        try:
            message = json.loads(line)
        except json.JSONDecodeError as err:
            raise ProtocolError(f"unparseable response line {snippet!r}: {err}") from err
        if not isinstance(message, dict) or "choice" not in message:
            raise ProtocolError(f"response must be an object with a 'choice' key, got {snippet!r}")
        choice = message["choice"]
        if not isinstance(choice, list) or len(choice) != len(context.prices):
            raise ProtocolError(
                f"'choice' must list {len(context.prices)} quantities, got {snippet!r}"
            )
        try:
            return Bundle(tuple(float(q) for q in choice))
        except (TypeError, ValueError) as err:
            raise ProtocolError(f"invalid choice quantities {snippet!r}: {err}") from err

    def close(self) -> None:
        """Shut the child down; harmless to call twice."""
        if self._child.stdin and not self._child.stdin.closed:
            try:
                self._child.stdin.close()
            except OSError:
                pass
        if self._child.poll() is None:
            self._child.terminate()
            try:
                self._child.wait(timeout=2.0)
            except subprocess.TimeoutExpired:
                self._child.kill()
                self._child.wait()

    def __enter__(self) -> "ExternalAgentClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
