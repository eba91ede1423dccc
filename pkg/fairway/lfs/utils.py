# coding: utf-8

import logging
import os

from contextlib import contextmanager
from typing import Iterator, List

from filelock import FileLock

from fairway.models.exceptions import IoFailure

logger = logging.getLogger('LFS Utils')


def clean_filename(filename):
    return ''.join(i for i in filename if i not in '<>:"/\\|?*')


@contextmanager
def locked_write(path: str, mode='w') -> Iterator:
    """
    Write `path` under a sibling ".lock" file; content goes to a temporary file
    first and replaces the target only once the block finished without error.
    """
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise IoFailure(f'Cannot create directory "{directory}": {e!r}')

    tmp_path = f'{path}.tmp'
    with FileLock(f'{path}.lock'):
        try:
            encoding = None if 'b' in mode else 'utf-8'
            newline = None if 'b' in mode else ''
            with open(tmp_path, mode, encoding=encoding, newline=newline) as f:
                yield f
            os.replace(tmp_path, path)
        except OSError as e:
            raise IoFailure(f'Writing "{path}" failed: {e!r}')
        finally:
            if os.path.exists(tmp_path):
                try:
                    os.remove(tmp_path)
                except OSError as e:
                    logger.warning(f'Removing temporary file "{tmp_path}" failed: {e!r}')


def list_files(path: str, suffix: str) -> List[str]:
    if not os.path.isdir(path):
        return []
    return sorted(os.path.join(path, f) for f in os.listdir(path) if f.endswith(suffix))
