"""A persistent SMT-LIB2 solver child process."""

from __future__ import annotations

import logging
import subprocess
import threading
from typing import List, Optional, Sequence

from ..errors import SmtBackendError
from .sexpr import SExpr, parse_sexprs

logger = logging.getLogger(__name__)

_MARKER = "muval-done"
_NOISE = {"success", "unsupported"}


class SmtProcess:
    """Line-oriented request/response channel to one solver process.

    Every request ends with an ``(echo ...)`` marker so that the reply can be
    delimited without relying on the solver's output layout. The process is
    (re)started lazily; a crash or watchdog kill surfaces as
    :class:`SmtBackendError` and the next request starts a fresh child.
    """

    def __init__(self, command: Sequence[str], timeout: Optional[float] = None) -> None:
        self.command = list(command)
        self.timeout = timeout
        self._proc: Optional[subprocess.Popen] = None
        self._lock = threading.Lock()

    @property
    def alive(self) -> bool:
        return self._proc is not None and self._proc.poll() is None

    def start(self) -> None:
        if self.alive:
            return
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.STDOUT,
                universal_newlines=True,
                bufsize=1,
            )
        except OSError as exc:
            raise SmtBackendError(
                f"cannot start solver {self.command[0]}: {exc}"
            ) from exc
        logger.debug("started solver process %s (pid %s)", self.command, self._proc.pid)

    def request(self, commands: List[str]) -> List[SExpr]:
        """Send ``commands`` and return the parsed responses, noise removed."""
        with self._lock:
            self.start()
            proc = self._proc
            assert proc is not None
            assert proc.stdin is not None and proc.stdout is not None
            script = "\n".join(commands) + f'\n(echo "{_MARKER}")\n'
            logger.debug(
                "smt request: %d commands, %d bytes", len(commands), len(script)
            )
            watchdog = None
            if self.timeout is not None:
                watchdog = threading.Timer(self.timeout, self._expire)
                watchdog.daemon = True
                watchdog.start()
            lines: List[str] = []
            try:
                proc.stdin.write(script)
                proc.stdin.flush()
                while True:
                    line = proc.stdout.readline()
                    if not line:
                        raise SmtBackendError(
                            "solver process terminated unexpectedly", "\n".join(lines)
                        )
                    stripped = line.strip()
                    if stripped.strip('"') == _MARKER:
                        break
                    lines.append(line)
            except (BrokenPipeError, OSError) as exc:
                self.kill()
                raise SmtBackendError(
                    f"solver pipe failed: {exc}", "".join(lines)
                ) from exc
            except SmtBackendError:
                self.kill()
                raise
            finally:
                if watchdog is not None:
                    watchdog.cancel()
        text = "".join(lines)
        logger.debug("smt response: %d bytes", len(text))
        try:
            responses = parse_sexprs(text)
        except ValueError as exc:
            raise SmtBackendError(f"malformed solver output: {exc}", text) from exc
        return [r for r in responses if not (isinstance(r, str) and r in _NOISE)]

    def _expire(self) -> None:
        logger.info("solver exceeded %.1fs, killing it", self.timeout or 0.0)
        self.kill()

    def kill(self) -> None:
        proc = self._proc
        if proc is not None and proc.poll() is None:
            proc.kill()
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:  # pragma: no cover
                pass
        self._proc = None

    def close(self) -> None:
        proc = self._proc
        if proc is None:
            return
        if proc.poll() is None and proc.stdin is not None:
            try:
                proc.stdin.write("(exit)\n")
                proc.stdin.flush()
                proc.wait(timeout=2)
            except (OSError, subprocess.TimeoutExpired):
                proc.kill()
        self._proc = None

    def __enter__(self) -> "SmtProcess":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()
