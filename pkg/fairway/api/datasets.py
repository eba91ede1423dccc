# !/usr/bin/env python
# coding: utf-8

import logging
import os

from platform import system

import requests

from requests.adapters import HTTPAdapter
from requests_futures.sessions import FuturesSession
from urllib3.util import Retry

from fairway import __version__
from fairway.lfs.utils import locked_write
from fairway.models.dataset import DatasetSpec
from fairway.models.exceptions import FetchError


class DatasetAPI:
    """Downloads the source files listed in a dataset spec."""
    _user_agent = f'Fairway/{__version__} ({system()})'

    def __init__(self, timeout=30.0, max_workers=4):
        self.log = logging.getLogger('DatasetAPI')

        retries = Retry(
            total=3,
            backoff_factor=0.1,
            status_forcelist=[500, 501, 502, 503, 504],
            allowed_methods={'GET'}
        )
        self.session = requests.session()
        self.session.headers['User-Agent'] = self._user_agent
        adapter = HTTPAdapter(pool_connections=max_workers, pool_maxsize=max_workers, max_retries=retries)
        self.session.mount('https://', adapter)
        self.session.mount('http://', adapter)
        self.future_session = FuturesSession(session=self.session, max_workers=max_workers)

        self.request_timeout = timeout if timeout > 0 else None

    def fetch(self, spec: DatasetSpec, target: str) -> int:
        """
        Download every url of `spec` concurrently and write them, in listed order,
        into `target`. Parts after the first have a leading header row removed
        when the spec declares one.

        :return: number of bytes written
        """
        if not spec.urls:
            raise FetchError(f'Dataset "{spec.name}" has no source urls, place the file at "{target}" manually')

        futures = [self.future_session.get(url, timeout=self.request_timeout) for url in spec.urls]
        parts = []
        for url, future in zip(spec.urls, futures):
            try:
                r = future.result()
                r.raise_for_status()
            except requests.RequestException as e:
                raise FetchError(f'Downloading "{url}" failed: {e!r}')
            self.log.debug(f'Fetched {len(r.content)} bytes from "{url}"')
            parts.append(r.content)

        written = 0
        with locked_write(target, 'wb') as f:
            for i, content in enumerate(parts):
                if i and spec.header:
                    content = content.split(b'\n', 1)[1] if b'\n' in content else b''
                if written and not content.startswith(b'\n'):
                    f.write(b'\n')
                    written += 1
                f.write(content.rstrip(b'\r\n'))
                written += len(content.rstrip(b'\r\n'))
            f.write(b'\n')
            written += 1

        self.log.info(f'Saved "{spec.name}" ({written} bytes) to "{os.path.abspath(target)}"')
        return written
