"""Out-of-process execution of code policies over the wire protocol.

One child process serves exactly one match: the host is spawned on
``reset`` (which also delivers the INIT seed) and terminated on ``close``,
so a hosted agent's memory spans the hands of one match and nothing more.
Arbitrary noise from the host never propagates as a crash; it surfaces as a
typed ``PolicyStepError``.
"""

from __future__ import annotations

import os
import queue
import shlex
import subprocess
import tempfile
import threading

from ..errors import (
    HandshakeTimeout,
    PolicyLoadError,
    PolicyStepError,
    SpawnError,
)
from ..games.base import Policy
from . import wire

_EOF = object()


class SubprocessCodePolicy(Policy):
    """Run a code-policy source through an external host process."""

    def __init__(self, source: str, game_id: str, runtime):
        self._source = source
        self._game_id = game_id
        self._runtime = runtime
        self._proc = None
        self._seq = 0
        self._lines = None
        self._stderr_chunks = []
        self._source_path = None

    # -- lifecycle -----------------------------------------------------

    def reset(self, seed: int) -> None:
        self.close()
        self._spawn()
        self._seq = 0
        reply = self._request(
            wire.INIT,
            {"game": self._game_id, "seed": seed},
            timeout=self._runtime.handshake_timeout,
            handshake=True,
        )
        if reply["type"] == wire.ERROR:
            payload = reply.get("payload") or {}
            message = payload.get("message", "host reported a load error")
            self.close()
            raise PolicyLoadError(message, stderr=self._stderr_text())

    def close(self) -> None:
        proc = self._proc
        self._proc = None
        if proc is not None:
            try:
                if proc.stdin:
                    proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=0.5)
            except subprocess.TimeoutExpired:
                proc.terminate()
                try:
                    proc.wait(timeout=0.5)
                except subprocess.TimeoutExpired:
                    proc.kill()
                    proc.wait()
        if self._source_path is not None:
            try:
                os.unlink(self._source_path)
            except OSError:
                pass
            self._source_path = None

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass

    # -- protocol ------------------------------------------------------

    def act(self, observation: dict) -> str:
        reply = self._step(wire.ACT_REQUEST, {"observation": observation})
        if reply["type"] != wire.ACT_RESPONSE or not isinstance(
            reply["payload"], str
        ):
            raise PolicyStepError(
                "malformed",
                f"expected an action string, got {reply['type']}",
                stderr=self._stderr_text(),
            )
        return reply["payload"]

    def restart(self, player_id: int) -> None:
        self._step(wire.RESTART, {"player_id": player_id})

    def receive_outcome(self, observation: dict) -> None:
        self._step(wire.OUTCOME, {"observation": observation})

    def _step(self, msg_type, payload):
        reply = self._request(
            msg_type, payload, timeout=self._runtime.move_timeout
        )
        if reply["type"] == wire.ERROR:
            err = reply.get("payload") or {}
            raise PolicyStepError(
                "error",
                err.get("message", "host reported an error"),
                stderr=err.get("traceback", "") or self._stderr_text(),
            )
        return reply

    # -- plumbing ------------------------------------------------------

    def _spawn(self):
        if not self._runtime.policy_host_cmd:
            raise SpawnError("no policy_host_cmd configured")
        fd, self._source_path = tempfile.mkstemp(
            suffix=".py", prefix="policy_"
        )
        with os.fdopen(fd, "w") as f:
            f.write(self._source)
        argv = shlex.split(self._runtime.policy_host_cmd) + [
            "--source",
            self._source_path,
            "--game",
            self._game_id,
        ]
        try:
            self._proc = subprocess.Popen(
                argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise SpawnError(f"could not launch host {argv[0]!r}: {exc}")
        self._lines = queue.Queue()
        self._stderr_chunks = []
        threading.Thread(
            target=_pump, args=(self._proc.stdout, self._lines), daemon=True
        ).start()
        threading.Thread(
            target=_collect,
            args=(self._proc.stderr, self._stderr_chunks),
            daemon=True,
        ).start()

    def _request(self, msg_type, payload, timeout, handshake=False):
        if self._proc is None or self._proc.poll() is not None:
            raise PolicyStepError(
                "crashed", "host process is not running",
                stderr=self._stderr_text(),
            )
        seq = self._seq
        self._seq += 1
        try:
            self._proc.stdin.write(wire.encode(msg_type, payload, seq))
            self._proc.stdin.flush()
        except (OSError, ValueError):
            raise PolicyStepError(
                "crashed", "could not write to host",
                stderr=self._stderr_text(),
            )
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty:
            if handshake:
                self.close()
                raise HandshakeTimeout(
                    f"host did not answer INIT within {timeout}s"
                )
            raise PolicyStepError(
                "timeout", f"no response within {timeout}s",
                stderr=self._stderr_text(),
            )
        if line is _EOF:
            raise PolicyStepError(
                "crashed", "host closed its output",
                stderr=self._stderr_text(),
            )
        try:
            reply = wire.decode(line)
        except ValueError as exc:
            raise PolicyStepError(
                "malformed", f"bad message from host: {exc}",
                stderr=self._stderr_text(),
            )
        if reply["seq"] != seq:
            raise PolicyStepError(
                "malformed",
                f"host answered seq {reply['seq']} to request {seq}",
                stderr=self._stderr_text(),
            )
        return reply

    def _stderr_text(self) -> str:
        return "".join(self._stderr_chunks)[-4000:]


def _pump(stream, lines):
    try:
        for line in stream:
            lines.put(line)
    except (OSError, ValueError):
        pass
    lines.put(_EOF)


def _collect(stream, chunks):
    try:
        for line in stream:
            chunks.append(line)
    except (OSError, ValueError):
        pass
