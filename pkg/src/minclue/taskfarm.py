"""Local master/worker harness: batch the catalogue, dispatch first-come
first-served to worker processes, checkpoint after every recorded batch,
and resume cleanly after interruption.

The dispatcher is the only writer of the checkpoint and the output file.
Batches are acknowledged whole: a batch is either recorded (its frame is
complete in the output and its id is in the checkpoint) or it will run
again, so records may repeat across crashed-then-resumed runs but are
never lost or torn.  merge_outputs collapses the repeats.
"""

from __future__ import annotations

import hashlib
import logging
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple

from .checker import (
    ReportOrError,
    SearchConfig,
    format_report,
    parse_report,
    search_catalog,
)
from .errors import CheckpointMismatchError, ConflictingRecordsError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WorkBatch:
    batch_id: int
    start: int  # first catalogue line index
    end: int  # one past the last


@dataclass
class Checkpoint:
    digest: str
    k: int
    n_batches: int
    done: Set[int] = field(default_factory=set)

    def save(self, path: Path) -> None:
        """Write-to-temporary then rename, so the file is never torn."""
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "w", encoding="ascii") as fh:
            fh.write(f"catalog {self.digest} k {self.k} batches {self.n_batches}\n")
            for batch_id in sorted(self.done):
                fh.write(f"done {batch_id}\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: Path) -> "Checkpoint":
        with open(path, encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        head = lines[0].split()
        if len(head) != 6 or head[0] != "catalog" or head[2] != "k" or head[4] != "batches":
            raise CheckpointMismatchError(f"malformed checkpoint header {lines[0]!r}")
        cp = cls(digest=head[1], k=int(head[3]), n_batches=int(head[5]))
        for ln in lines[1:]:
            tag, batch_id = ln.split()
            if tag != "done":
                raise CheckpointMismatchError(f"malformed checkpoint line {ln!r}")
            cp.done.add(int(batch_id))
        return cp


@dataclass(frozen=True)
class FarmSummary:
    batches_total: int
    done_before: int
    recorded_now: int
    pending_after: int
    elapsed_s: float


def plan_batches(n_lines: int, batch_size: int) -> List[WorkBatch]:
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    return [
        WorkBatch(i, start, min(start + batch_size, n_lines))
        for i, start in enumerate(range(0, n_lines, batch_size))
    ]


def catalogue_digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _worker_cap(requested: int) -> int:
    env = os.environ.get("CHECKER_THREADS", "").strip()
    if env.isdigit() and int(env) >= 1:
        return min(requested, int(env))
    return requested


def _run_batch(args) -> Tuple[int, int, int, List[str]]:
    """Worker entry: search one batch of grid lines; returns the frame
    payload (one formatted report block per grid)."""
    batch_id, start, end, lines, k, config = args
    blocks: List[str] = []

    def sink(record: ReportOrError) -> None:
        blocks.append(format_report(record))

    search_catalog(lines, k, config, sink)
    return batch_id, start, end, blocks


def run_farm(
    catalogue_path,
    k: int,
    workers: int = 1,
    batch_size: int = 16,
    checkpoint_path=None,
    output_path=None,
    time_budget: Optional[float] = None,
    config: SearchConfig = SearchConfig(),
    max_batches: Optional[int] = None,
) -> FarmSummary:
    """Process every not-yet-done batch of the catalogue, recording each
    exactly once across invocations.

    `time_budget` (seconds) and `max_batches` both stop the run early;
    batches in flight at that point are abandoned (recorded by a later
    invocation).  A worker crash abandons its batch the same way.
    """
    catalogue_path = Path(catalogue_path)
    checkpoint_path = Path(checkpoint_path)
    output_path = Path(output_path)
    if workers < 1:
        raise ValueError("workers must be at least 1")
    started = time.monotonic()
    deadline = None if time_budget is None else started + time_budget

    lines = catalogue_path.read_text(encoding="ascii").splitlines()
    digest = catalogue_digest(catalogue_path)
    batches = plan_batches(len(lines), batch_size)

    if checkpoint_path.exists():
        cp = Checkpoint.load(checkpoint_path)
        if cp.digest != digest:
            raise CheckpointMismatchError(
                "checkpoint was written for a different catalogue"
            )
        if cp.k != k or cp.n_batches != len(batches):
            raise CheckpointMismatchError(
                "checkpoint k or batch plan does not match this run"
            )
    else:
        cp = Checkpoint(digest=digest, k=k, n_batches=len(batches))
        cp.save(checkpoint_path)

    done_before = len(cp.done)
    pending = [b for b in batches if b.batch_id not in cp.done]
    recorded = 0
    workers = _worker_cap(workers)

    def record(batch: WorkBatch, blocks: List[str]) -> None:
        nonlocal recorded
        with open(output_path, "a", encoding="ascii") as fh:
            fh.write(f"batch {batch.batch_id} range {batch.start} {batch.end}\n")
            for block in blocks:
                fh.write(block + "\n")
            fh.write(f"end batch {batch.batch_id}\n")
            fh.flush()
            os.fsync(fh.fileno())
        cp.done.add(batch.batch_id)
        cp.save(checkpoint_path)
        recorded += 1

    stopped = False
    if pending:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {}
            retried: Set[int] = set()
            queue = list(pending)
            by_id = {b.batch_id: b for b in batches}

            def submit(batch: WorkBatch) -> None:
                payload = (
                    batch.batch_id,
                    batch.start,
                    batch.end,
                    lines[batch.start : batch.end],
                    k,
                    config,
                )
                futures[pool.submit(_run_batch, payload)] = batch

            # prime the pool; workers pull the next batch as they finish
            for batch in queue[: workers * 2]:
                submit(batch)
            queue = queue[workers * 2 :]

            try:
                while futures and not stopped:
                    done_set, _ = wait(futures, return_when=FIRST_COMPLETED)
                    for future in done_set:
                        batch = futures.pop(future)
                        try:
                            batch_id, _s, _e, blocks = future.result()
                        except BrokenProcessPool:
                            raise
                        except Exception:
                            logger.exception(
                                "batch %d failed; returning it to pending",
                                batch.batch_id,
                            )
                            if batch.batch_id not in retried:
                                retried.add(batch.batch_id)
                                queue.insert(0, batch)
                            continue
                        record(batch, blocks)
                        if max_batches is not None and recorded >= max_batches:
                            stopped = True
                            break
                        if deadline is not None and time.monotonic() >= deadline:
                            stopped = True
                            break
                    while not stopped and queue and len(futures) < workers * 2:
                        submit(queue.pop(0))
            except BrokenProcessPool:
                logger.error(
                    "worker pool broke; %d batches stay pending for resume",
                    len(futures) + len(queue),
                )
            finally:
                for future in futures:
                    future.cancel()

    return FarmSummary(
        batches_total=len(batches),
        done_before=done_before,
        recorded_now=recorded,
        pending_after=len(batches) - len(cp.done),
        elapsed_s=time.monotonic() - started,
    )


# ---------------------------------------------------------------------------
# output merging

def _parse_frames(text: str) -> List[Tuple[int, int, int, List[str]]]:
    """Complete frames as (batch_id, start, end, report blocks); torn
    trailing frames (from a crash mid-write) are dropped."""
    frames = []
    current: Optional[Tuple[int, int, int]] = None
    blocks: List[str] = []
    pending_block: List[str] = []

    def close_block() -> None:
        if pending_block:
            blocks.append("\n".join(pending_block))
            pending_block.clear()

    for line in text.splitlines():
        if line.startswith("batch "):
            parts = line.split()
            current = (int(parts[1]), int(parts[3]), int(parts[4]))
            blocks = []
            pending_block = []
        elif line.startswith("end batch "):
            if current is None:
                continue
            close_block()
            if int(line.split()[2]) == current[0]:
                frames.append((*current, blocks))
            current = None
        elif current is not None:
            if line.startswith("\t"):
                pending_block.append(line)
            else:
                close_block()
                pending_block.append(line)
    return frames


def merge_outputs(output_path) -> List[ReportOrError]:
    """Reports in catalogue order, duplicate batch records collapsed.

    Duplicates must agree record-for-record; disagreement means the search
    was nondeterministic upstream and is a hard error.
    """
    text = Path(output_path).read_text(encoding="ascii")
    by_id: Dict[int, Tuple[int, int, List[str]]] = {}
    for batch_id, start, end, blocks in _parse_frames(text):
        if batch_id in by_id:
            prev = by_id[batch_id]
            if prev[0] != start or prev[1] != end or prev[2] != blocks:
                raise ConflictingRecordsError(
                    f"batch {batch_id} has conflicting duplicate records"
                )
        by_id[batch_id] = (start, end, blocks)
    out: List[ReportOrError] = []
    for batch_id in sorted(by_id, key=lambda b: by_id[b][0]):
        for block in by_id[batch_id][2]:
            out.append(parse_report(block))
    return out
