"""Asynchronous generation jobs over a bounded worker pool.

Editing must not block on generation, so requests are queued and a small
fixed pool of worker threads drains them.  Request validation happens at
submit time: a request that would be refused never occupies the queue or
touches a provider.  Cancelling a queued job removes it before any
provider call; cancelling a running one lets the in-flight provider call
finish and then discards the result.

State machine: queued -> running -> done | failed | cancelled, plus
queued -> cancelled.  Every change is recorded in ``transitions`` and
reported to registered listeners, so clients can mirror job progress.
"""

from __future__ import annotations

import random
import threading
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum

from .assets import AssetStore
from .errors import ProviderError, QueueFull, StoryError, UnknownJob
from .generation import (
    AudioRequest,
    Clock,
    GenerationRequest,
    ImageRequest,
    SegmentationRequest,
    SpeechRequest,
    generate_audio,
    generate_images,
    now_iso,
    segment_character,
    synthesize_speech,
    validate_request,
)
from .providers.base import ProviderSet
from .safety import SafetyPolicy


class JobState(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"
    CANCELLED = "cancelled"


LEGAL_TRANSITIONS = frozenset(
    {
        (JobState.QUEUED, JobState.RUNNING),
        (JobState.RUNNING, JobState.DONE),
        (JobState.RUNNING, JobState.FAILED),
        (JobState.QUEUED, JobState.CANCELLED),
        (JobState.RUNNING, JobState.CANCELLED),
    }
)


@dataclass(frozen=True)
class GenerationJob:
    """Immutable snapshot of a job as of one poll."""

    job_id: str
    request: GenerationRequest
    state: JobState
    result: tuple[str, ...] | None = None
    error: str | None = None
    error_code: str | None = None
    trigger_warning: bool = False
    transitions: tuple[tuple[str, str], ...] = ()
    extra: dict = field(default_factory=dict)


class _Job:
    def __init__(self, job_id: str, request: GenerationRequest):
        self.job_id = job_id
        self.request = request
        self.state = JobState.QUEUED
        self.result: tuple[str, ...] | None = None
        self.error: str | None = None
        self.error_code: str | None = None
        self.trigger_warning = False
        self.cancel_requested = False
        self.transitions: list[tuple[str, str]] = []

    def snapshot(self) -> GenerationJob:
        return GenerationJob(
            job_id=self.job_id,
            request=self.request,
            state=self.state,
            result=self.result,
            error=self.error,
            error_code=self.error_code,
            trigger_warning=self.trigger_warning,
            transitions=tuple(self.transitions),
        )


class JobQueue:
    def __init__(
        self,
        providers: ProviderSet,
        store: AssetStore,
        *,
        policy: SafetyPolicy | None = None,
        workers: int = 2,
        backlog: int = 32,
        rng: random.Random | None = None,
        clock: Clock = now_iso,
    ):
        self._providers = providers
        self._store = store
        self._policy = policy
        self._backlog = backlog
        self._rng = rng or random.Random()
        self._clock = clock
        self._cond = threading.Condition()
        self._pending: deque[_Job] = deque()
        self._jobs: dict[str, _Job] = {}
        self._listeners: list = []
        self._counter = 0
        self._closing = False
        self._running_now = 0
        self.max_concurrent = 0
        self._threads = [
            threading.Thread(target=self._worker, name=f"jobs-{i}", daemon=True)
            for i in range(workers)
        ]
        for t in self._threads:
            t.start()

    # -- public api ---------------------------------------------------------

    def add_listener(self, fn) -> None:
        """``fn(snapshot)`` is called after every state change."""
        self._listeners.append(fn)

    def submit(self, request: GenerationRequest) -> GenerationJob:
        validate_request(request)
        # draw missing seeds here, in submission order, so results do not
        # depend on which worker picks the job up
        if isinstance(request, (ImageRequest, AudioRequest)) and request.seed is None:
            request = replace(request, seed=self._rng.randrange(2**31))
        with self._cond:
            if self._closing:
                raise RuntimeError("queue is closed")
            if len(self._pending) >= self._backlog:
                raise QueueFull(f"backlog of {self._backlog} is full", backlog=self._backlog)
            self._counter += 1
            job = _Job(f"j{self._counter}", request)
            self._jobs[job.job_id] = job
            self._pending.append(job)
            snap = job.snapshot()
            self._cond.notify()
        self._notify(snap)
        return snap

    def poll(self, job_id: str) -> GenerationJob:
        with self._cond:
            return self._get(job_id).snapshot()

    def cancel(self, job_id: str) -> GenerationJob:
        changed = None
        with self._cond:
            job = self._get(job_id)
            if job.state is JobState.QUEUED:
                self._pending.remove(job)
                self._set_state(job, JobState.CANCELLED)
                changed = job.snapshot()
            elif job.state is JobState.RUNNING:
                job.cancel_requested = True
            snap = job.snapshot()
        if changed is not None:
            self._notify(changed)
        return snap

    def jobs(self) -> list[GenerationJob]:
        with self._cond:
            return [j.snapshot() for j in self._jobs.values()]

    def wait_all(self, timeout: float = 30.0) -> None:
        """Block until nothing is queued or running (test convenience)."""
        with self._cond:
            self._cond.wait_for(
                lambda: not self._pending and self._running_now == 0, timeout=timeout
            )

    def close(self) -> None:
        with self._cond:
            self._closing = True
            self._cond.notify_all()
        for t in self._threads:
            t.join(timeout=5)

    def __enter__(self) -> "JobQueue":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- internals ----------------------------------------------------------

    def _get(self, job_id: str) -> _Job:
        job = self._jobs.get(job_id)
        if job is None:
            raise UnknownJob(f"no job {job_id!r}", job_id=job_id)
        return job

    def _set_state(self, job: _Job, state: JobState) -> None:
        job.transitions.append((job.state.value, state.value))
        job.state = state

    def _notify(self, snap: GenerationJob) -> None:
        for fn in self._listeners:
            fn(snap)

    def _execute(self, request: GenerationRequest) -> list:
        p = self._providers
        kw = dict(policy=self._policy, clock=self._clock)
        if isinstance(request, ImageRequest):
            if p.image is None:
                raise ProviderError("no image provider configured")
            return generate_images(request, p.image, self._store, **kw)
        if isinstance(request, AudioRequest):
            if p.audio is None:
                raise ProviderError("no audio provider configured")
            return [generate_audio(request, p.audio, self._store, **kw)]
        if isinstance(request, SpeechRequest):
            if p.speech is None:
                raise ProviderError("no speech provider configured")
            return [synthesize_speech(request, p.speech, self._store, **kw)]
        if isinstance(request, SegmentationRequest):
            if p.segmentation is None:
                raise ProviderError("no segmentation provider configured")
            return [segment_character(request, p.segmentation, self._store, clock=self._clock)]
        raise TypeError(f"not a generation request: {request!r}")

    def _worker(self) -> None:
        while True:
            with self._cond:
                self._cond.wait_for(lambda: self._pending or self._closing)
                if self._closing and not self._pending:
                    return
                job = self._pending.popleft()
                self._set_state(job, JobState.RUNNING)
                self._running_now += 1
                self.max_concurrent = max(self.max_concurrent, self._running_now)
                started = job.snapshot()
            self._notify(started)

            refs = error = None
            try:
                refs = self._execute(job.request)
            except StoryError as exc:
                error = (exc.code, exc.message)
            except Exception as exc:  # provider contract breach, not user error
                error = ("ProviderError", str(exc))

            with self._cond:
                self._running_now -= 1
                if job.cancel_requested:
                    self._set_state(job, JobState.CANCELLED)
                elif error is not None:
                    self._set_state(job, JobState.FAILED)
                    job.error_code, job.error = error
                else:
                    self._set_state(job, JobState.DONE)
                    job.result = tuple(r.asset_id for r in refs)
                    job.trigger_warning = any(
                        r.provenance.params.get("trigger_warning") for r in refs
                    )
                finished = job.snapshot()
                self._cond.notify_all()
            self._notify(finished)
