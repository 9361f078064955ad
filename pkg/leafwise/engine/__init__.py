from . import abstract_analysis_engine
