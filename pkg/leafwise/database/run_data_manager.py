from leafwise.database.db_document import AbstractDatabaseDocument


class RunDataManager():

    def __init__(self, db_doc: AbstractDatabaseDocument, command: str, new=False):
        self.command = command
        self.db_doc = db_doc
        if new:
            self.db_doc._save({
                'command': command,
                'finished': False,
                'last_completed_step': 0,
            })

    def save(self, key, value):
        self.db_doc._save({key: value})

    def get(self, key):
        return self.db_doc._get(key)

    def _getId(self):
        return self.db_doc._getId()

    def __str__(self):
        return self.db_doc.__str__()
