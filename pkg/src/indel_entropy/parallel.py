"""Order-preserving concurrent map with an optional progress bar."""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import TypeVar

from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(
    func: Callable[[T], R],
    items: Sequence[T],
    *,
    max_workers: int = 1,
    show_progress: bool = False,
    description: str = "Working",
    on_done: Callable[[int], None] | None = None,
) -> list[R]:
    """Apply func to every item on a thread pool and return results in item order.

    Threads suit I/O-bound work. For the CPU-bound scans here they do not
    speed anything up; max_workers only changes scheduling, never results.

    Args:
        func: Function applied to each item
        items: Work items
        max_workers: Maximum number of worker threads (default: 1)
        show_progress: Whether to show a progress bar on stderr (default: False)
        description: Label shown next to the progress bar
        on_done: Optional callback receiving the index of each finished item

    Returns:
        List of results, results[i] = func(items[i])
    """
    if max_workers < 1:
        raise ValueError(f"max_workers must be at least 1, got {max_workers}")

    results: list[tuple[int, R]] = []

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        future_to_index = {
            executor.submit(func, item): index for index, item in enumerate(items)
        }

        progress = None
        if show_progress:
            progress = Progress(
                SpinnerColumn(),
                TextColumn("[bold blue]{task.description} {task.completed}/{task.total}"),
                BarColumn(),
                TaskProgressColumn(),
                console=Console(stderr=True),
            )
            progress.start()
            task = progress.add_task(description, total=len(items))

        try:
            for future in as_completed(future_to_index):
                index = future_to_index[future]
                results.append((index, future.result()))
                if on_done is not None:
                    on_done(index)
                if progress is not None:
                    progress.update(task, advance=1)
        finally:
            if progress is not None:
                progress.stop()

    # Completion order depends on scheduling; restore item order
    results.sort(key=lambda pair: pair[0])
    return [result for _, result in results]
