"""Annotation service: serves highlighted-trigger tasks over HTTP.

Tasks are enumerated once, in trigger-encounter order, from the pool and
the initial labeled data; workers receive the lowest-sequence task that is
neither done nor leased out. Completed translations are appended to a
record file that replays on restart, so a crash loses nothing but open
leases.
"""

from __future__ import annotations

import json
import threading
import time
from collections.abc import Callable, Iterable
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .corpus import DictionaryEntry, NGram, Sentence, tokenize
from .coverage import build_frequency_table, initialize_coverage
from .selection import (
    DEFAULT_MAX_SENTENCE_LEN,
    AnnotationTask,
    ConsistencyError,
    Pool,
    hng_task_stream,
)

DEFAULT_LEASE_SECONDS = 30 * 60


class UnknownTaskError(KeyError):
    pass


class TaskConflictError(RuntimeError):
    """Task is not pending for this worker (already done or never served)."""


class EmptyTranslationError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotationRecord:
    """A completed task: what was translated, by whom, how long, how much."""

    task_id: str
    trigger: NGram
    translation: tuple[str, ...]
    serve_time: float
    submit_time: float
    elapsed_seconds: float
    worker_id: str
    dollars: Decimal

    def __post_init__(self) -> None:
        if not self.translation:
            raise ValueError("empty translation")
        if self.elapsed_seconds < 0:
            raise ValueError("negative elapsed time")
        if abs((self.serve_time + self.elapsed_seconds) - self.submit_time) > 1e-6:
            raise ValueError("submit_time does not match serve_time + elapsed")

    def to_json(self) -> str:
        return json.dumps(
            {
                "task_id": self.task_id,
                "trigger": list(self.trigger),
                "translation": list(self.translation),
                "serve_time": self.serve_time,
                "submit_time": self.submit_time,
                "elapsed_seconds": self.elapsed_seconds,
                "worker_id": self.worker_id,
                "dollars": str(self.dollars),
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "AnnotationRecord":
        data = json.loads(line)
        return cls(
            task_id=data["task_id"],
            trigger=tuple(data["trigger"]),
            translation=tuple(data["translation"]),
            serve_time=data["serve_time"],
            submit_time=data["submit_time"],
            elapsed_seconds=data["elapsed_seconds"],
            worker_id=data["worker_id"],
            dollars=Decimal(data["dollars"]),
        )


@dataclass
class _Lease:
    worker_id: str
    serve_time: float
    serve_mono: float
    expires_mono: float


@dataclass
class _TaskState:
    task: AnnotationTask
    leases: dict[str, _Lease] = field(default_factory=dict)
    records: list[AnnotationRecord] = field(default_factory=list)
    submitted_workers: set[str] = field(default_factory=set)


class AnnotationSession:
    """All serving/submission state; every mutation runs under one lock."""

    def __init__(
        self,
        pool: Iterable[Sentence],
        labeled_sources: Iterable[Sentence] = (),
        dictionary: Iterable[DictionaryEntry] = (),
        *,
        price: Decimal = Decimal("0.01"),
        lease_seconds: float = DEFAULT_LEASE_SECONDS,
        max_sentence_len: int = DEFAULT_MAX_SENTENCE_LEN,
        redundancy: int = 1,
        n_max: int = 4,
        store_path: str | Path | None = None,
        clock: Callable[[], float] = time.time,
        mono: Callable[[], float] = time.monotonic,
    ) -> None:
        if redundancy < 1:
            raise ValueError("redundancy must be >= 1")
        pool = list(pool)
        labeled_sources = list(labeled_sources)
        dictionary = list(dictionary)
        self.price = price
        self.lease_seconds = lease_seconds
        self.redundancy = redundancy
        self._clock = clock
        self._mono = mono
        self._lock = threading.Lock()

        table = build_frequency_table(pool, labeled_sources, dictionary, n_max)
        self.index = initialize_coverage(table, labeled_sources, dictionary, n_max)
        # Task enumeration advances its own scratch coverage; the live index
        # above only ever reflects completed submissions.
        scratch = initialize_coverage(table, labeled_sources, dictionary, n_max)
        pool_index = Pool(pool)
        self._tasks: dict[str, _TaskState] = {}
        self._order: list[_TaskState] = []
        for task in hng_task_stream(pool_index, scratch, price, max_sentence_len):
            state = _TaskState(task=task)
            self._tasks[task.task_id] = state
            self._order.append(state)

        self.records: list[AnnotationRecord] = []
        self._store_path = Path(store_path) if store_path else None
        self._store_fp = None
        if self._store_path is not None and self._store_path.exists():
            for line in self._store_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._apply_record(AnnotationRecord.from_json(line))
        if self._store_path is not None:
            self._store_path.parent.mkdir(parents=True, exist_ok=True)
            self._store_fp = self._store_path.open("a", encoding="utf-8")

    def _apply_record(self, record: AnnotationRecord) -> None:
        state = self._tasks.get(record.task_id)
        if state is None:
            raise ConsistencyError(
                f"record for unknown task {record.task_id}; store and corpus "
                "inputs are out of sync"
            )
        state.records.append(record)
        state.submitted_workers.add(record.worker_id)
        self.records.append(record)
        self.index.mark_trigger_covered(record.trigger)

    def _completed(self, state: _TaskState) -> bool:
        return len(state.records) >= self.redundancy

    def _expire_leases(self) -> None:
        now = self._mono()
        for state in self._order:
            expired = [
                worker
                for worker, lease in state.leases.items()
                if lease.expires_mono <= now
            ]
            for worker in expired:
                del state.leases[worker]

    def serve_next(self, worker_id: str) -> AnnotationTask | None:
        """Lowest-sequence task this worker can take, or None when no work.

        A worker that already holds a lease gets the same task again (its
        original serve time stands); otherwise leases never overlap unless
        redundancy asks for multiple translations per trigger.
        """
        with self._lock:
            self._expire_leases()
            for state in self._order:
                if worker_id in state.leases:
                    return state.task
            for state in self._order:
                if self._completed(state):
                    continue
                if worker_id in state.submitted_workers:
                    continue
                if len(state.leases) + len(state.records) >= self.redundancy:
                    continue
                serve_mono = self._mono()
                state.leases[worker_id] = _Lease(
                    worker_id=worker_id,
                    serve_time=self._clock(),
                    serve_mono=serve_mono,
                    expires_mono=serve_mono + self.lease_seconds,
                )
                return state.task
            return None

    def submit(
        self, task_id: str, worker_id: str, translation: str
    ) -> AnnotationRecord:
        """Record a translation, cover its trigger, release the lease."""
        with self._lock:
            state = self._tasks.get(task_id)
            if state is None:
                raise UnknownTaskError(task_id)
            tokens = tuple(tokenize(translation))
            if not tokens:
                raise EmptyTranslationError("translation is empty")
            lease = state.leases.get(worker_id)
            if lease is None:
                raise TaskConflictError(
                    f"task {task_id} is not pending for worker {worker_id}"
                )
            elapsed = max(0.0, self._mono() - lease.serve_mono)
            record = AnnotationRecord(
                task_id=task_id,
                trigger=state.task.trigger,
                translation=tokens,
                serve_time=lease.serve_time,
                submit_time=lease.serve_time + elapsed,
                elapsed_seconds=elapsed,
                worker_id=worker_id,
                dollars=state.task.unit_price,
            )
            del state.leases[worker_id]
            if self._store_fp is not None:
                self._store_fp.write(record.to_json() + "\n")
                self._store_fp.flush()
            self._apply_record(record)
            return record

    def status(self) -> dict:
        """A consistent snapshot of progress and ledger totals."""
        with self._lock:
            self._expire_leases()
            total = len(self._order)
            covered = sum(1 for s in self._order if s.records)
            pending = sum(
                1 for s in self._order if s.leases and not self._completed(s)
            )
            remaining = sum(
                1
                for s in self._order
                if not s.records and not s.leases
            )
            words = sum(len(r.trigger) for r in self.records)
            seconds = sum(r.elapsed_seconds for r in self.records)
            dollars = sum(
                (r.dollars for r in self.records), start=Decimal("0")
            )
            return {
                "triggers": {
                    "total": total,
                    "covered": covered,
                    "pending": pending,
                    "remaining": remaining,
                },
                "stopping_met": self.index.stopping_met(),
                "records": len(self.records),
                "totals": {
                    "sentences": 0,
                    "words": words,
                    "seconds": seconds,
                    "dollars": str(dollars),
                },
            }

    def export_lines(self) -> list[str]:
        with self._lock:
            return [r.to_json() for r in self.records]

    def export(self, path: str | Path) -> None:
        """Write the record file; loading it back reproduces the ledger."""
        Path(path).write_text(
            "".join(line + "\n" for line in self.export_lines()),
            encoding="utf-8",
        )

    def close(self) -> None:
        if self._store_fp is not None:
            self._store_fp.flush()
            self._store_fp.close()
            self._store_fp = None


def task_payload(task: AnnotationTask) -> dict:
    return {
        "task_id": task.task_id,
        "context": list(task.context_tokens),
        "highlight": list(task.highlight_span),
        "sequence_no": task.sequence_no,
    }


class SubmitBody(BaseModel):
    worker: str
    translation: str


def create_app(session: AnnotationSession) -> FastAPI:
    """The HTTP surface: GET /task, POST /task/{id}, GET /status, GET /export."""

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        session.close()

    app = FastAPI(title="vocabgrowth annotation service", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.session = session

    @app.get("/task")
    def get_task(worker: str):
        task = session.serve_next(worker)
        if task is None:
            return Response(status_code=204)
        return task_payload(task)

    @app.post("/task/{task_id}")
    def post_task(task_id: str, body: SubmitBody):
        try:
            record = session.submit(task_id, body.worker, body.translation)
        except UnknownTaskError:
            raise HTTPException(status_code=404, detail=f"unknown task {task_id}")
        except TaskConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except EmptyTranslationError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return json.loads(record.to_json())

    @app.get("/status")
    def get_status():
        return session.status()

    @app.get("/export")
    def get_export():
        lines = session.export_lines()
        return PlainTextResponse("".join(line + "\n" for line in lines))

    return app
