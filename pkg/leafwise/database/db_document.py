import os
import threading
from abc import ABC, abstractmethod

from tinydb import Query, TinyDB


class AbstractDatabaseDocument(ABC):

    @abstractmethod
    def _save(self, data):
        '''Save the data in the database'''
        pass

    @abstractmethod
    def _get(self, key):
        '''Get the data from the database'''
        pass

    @abstractmethod
    def _getId(self):
        '''Get the id of the document'''
        pass

    @abstractmethod
    def __str__(self):
        '''Return the string representation of the document'''
        pass

    @abstractmethod
    def _delete(self, key):
        '''Delete a key of the document'''
        pass


_DATABASES = {}
_DATABASES_LOCK = threading.Lock()


def open_database(db_dir: str, db_name: str) -> TinyDB:
    """One TinyDB handle per json file, shared by every document living in it."""
    path = os.path.abspath(os.path.join(db_dir, f"{db_name}.json"))
    with _DATABASES_LOCK:
        if path not in _DATABASES:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            _DATABASES[path] = TinyDB(path, sort_keys=True, indent=2)
        return _DATABASES[path]


class TinyDocument(AbstractDatabaseDocument):
    _lock = threading.Lock()

    def __init__(self, db_dir: str, db_name: str, collection_name: str, document_id: str, create=False):
        self.collection = open_database(db_dir, db_name).table(collection_name)
        self.collection_name = collection_name
        self.document_id = document_id
        if not self.exists():
            if create:
                with self._lock:
                    self.collection.insert({"_id": document_id})
            else:
                raise KeyError(f"The document with id {document_id} in collection {collection_name} of database {db_name} does not exist")

    def _query(self):
        return Query()._id == self.document_id

    def exists(self):
        with self._lock:
            return self.collection.contains(self._query())

    def _save(self, data: dict):
        with self._lock:
            document = self.collection.get(self._query()) or {"_id": self.document_id}
            for key, value in data.items():
                path_parts = key.split(".")
                target = document
                for part in path_parts[:-1]:
                    if not isinstance(target.get(part), dict):
                        target[part] = {}
                    target = target[part]
                target[path_parts[-1]] = value
            self.collection.update(dict(document), self._query())

    def _get(self, key=None):
        with self._lock:
            document = self.collection.get(self._query())
            if document is None:
                return None
            document = dict(document)
            if not key:
                del document['_id']
                return document
            value = document
            for k in key.split("."):
                if not isinstance(value, dict) or k not in value:
                    return None
                value = value[k]
            return value

    def _delete(self, key):
        with self._lock:
            document = self.collection.get(self._query())
            if document is None or key not in document:
                raise KeyError(f"Key '{key}' not found in the document {self.document_id}")
            document = dict(document)
            del document[key]
            self.collection.remove(self._query())
            self.collection.insert(document)

    def _getId(self):
        return self.document_id

    def __str__(self):
        with self._lock:
            return str(self.collection.get(self._query()))
