from . import artifact_io
