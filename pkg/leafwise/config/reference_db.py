from pathlib import Path

import pandas as pd

from leafwise.config.config import read_yaml_config
from leafwise.errors import UnknownReferenceError

REFERENCES_PATH = (Path(__file__).parent / 'references.yaml').resolve()
REFERENCE_ONLY_NOTE = "reference only — not computed by this tool"


class ReferenceRegistry:
    """
    Read-only registry of known leafwise cohomology results.
    Entries are loaded once from the packaged references.yaml. Entries that no leafwise
    operation computes are marked as reference only, so no caller can mistake a stored
    statement for a computed one.
    """

    _entries = {}
    for _entry in read_yaml_config(REFERENCES_PATH).get('references', []):
        _entry = dict(_entry)
        _entry['note'] = (f"computed by {_entry['computed_by']}" if _entry.get('computed_by')
                          else REFERENCE_ONLY_NOTE)
        _entries[_entry['id']] = _entry
    del _entry

    @classmethod
    def ids(cls) -> list[str]:
        return sorted(cls._entries)

    @classmethod
    def get(cls, reference_id: str) -> dict:
        if reference_id not in cls._entries:
            raise UnknownReferenceError(f"Reference '{reference_id}' does not exist. Known ids: {', '.join(cls.ids())}")
        return dict(cls._entries[reference_id])

    @classmethod
    def search(cls, query: str = "") -> list[dict]:
        """Exact id match first, then case-insensitive substring match on id, statement, anchor and source.
        An empty query lists everything."""
        query = (query or "").strip()
        if not query:
            return [cls.get(i) for i in cls.ids()]
        if query in cls._entries:
            return [cls.get(query)]
        needle = query.lower()
        matches = [i for i in cls.ids()
                   if any(needle in str(cls._entries[i].get(field, "")).lower()
                          for field in ('id', 'statement', 'anchor', 'source'))]
        if not matches:
            raise UnknownReferenceError(f"No reference matches '{query}'. Known ids: {', '.join(cls.ids())}")
        return [cls.get(i) for i in matches]

    @classmethod
    def is_computed(cls, reference_id: str) -> bool:
        return cls.get(reference_id).get('computed_by') is not None

    @classmethod
    def as_dataframe(cls) -> pd.DataFrame:
        data = {"id": [], "statement": [], "value": [], "anchor": [], "source": [], "note": []}
        for entry in cls.search():
            for key in data:
                data[key].append(entry.get(key))
        return pd.DataFrame(data)
