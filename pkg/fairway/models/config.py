import configparser
import os
import time

from typing import Callable, List, Optional, TypeVar

from fairway.models.exceptions import InvalidParameter

T = TypeVar('T')

APP_SECTION = 'Fairway'


class FairwayConf(configparser.ConfigParser):
    """
    ConfigParser used for both the app config and dataset spec files.

    Writes are tracked so the app config is only saved when something changed,
    and a config that failed to parse is put into read-only mode.
    """

    def __init__(self, *args, **kwargs):
        self.modified = False
        self.read_only = False
        self.modtime = None
        super().__init__(*args, **kwargs)
        # column names in dataset specs are case sensitive
        self.optionxform = str

    def read(self, filename, encoding='utf-8'):
        if os.path.exists(filename):
            self.modtime = int(os.stat(filename).st_mtime)
        return super().read(filename, encoding=encoding)

    def write(self, *args, **kwargs):
        self.modified = False
        super().write(*args, **kwargs)
        self.modtime = int(time.time())

    def set(self, section, option, value=None):
        if self.read_only:
            return
        if not self.has_section(section):
            self.add_section(section)
        self.modified = True
        super().set(section, option, value)

    def set_documented(self, option: str, value: str, comment: str, section: str = APP_SECTION):
        """Add an option preceded by an explainer comment, unless the user already set it."""
        if self.has_option(section, option):
            return
        self.set(section, f'; {comment}')
        self.set(section, option, value)

    def get_typed(self, option: str, convert: Callable[[str], T], fallback: Optional[T] = None,
                  section: str = APP_SECTION) -> Optional[T]:
        """
        Read an option through `convert`. Missing or empty values give `fallback`,
        values `convert` rejects raise InvalidParameter naming the option.
        """
        raw = self.get(section, option, fallback=None)
        if raw is None or raw.strip() == '':
            return fallback
        try:
            return convert(raw.strip())
        except ValueError as e:
            raise InvalidParameter(f'Invalid value "{raw}" for "{option}" in config: {e}')

    def get_list(self, option: str, convert: Callable[[str], T] = str, fallback: Optional[List[T]] = None,
                 section: str = APP_SECTION) -> Optional[List[T]]:
        """Comma separated option, empty entries skipped."""
        return self.get_typed(option, lambda raw: [convert(v.strip()) for v in raw.split(',') if v.strip()],
                              fallback, section=section)
