import time

from proglog import ProgressBarLogger


class AnalysisProgressLogger(ProgressBarLogger):
    """Forwards bar updates and messages of long loops to an engine logger callable."""

    def __init__(self, callBackFunction=None, every: int = 1):
        super().__init__()
        self.callBackFunction = callBackFunction
        self.every = max(1, every)
        self.start_time = time.time()

    def _emit(self, text):
        if self.callBackFunction:
            self.callBackFunction(text)
        else:
            print(text)

    def callback(self, **changes):
        # proglog routes logger(message=...) here
        if 'message' in changes:
            self._emit(changes['message'])

    def bars_callback(self, bar, attr, value, old_value=None):
        if attr != 'index':
            return
        total = self.bars[bar].get('total')
        done = value
        if done != total and done % self.every:
            return
        elapsed_time = time.time() - self.start_time
        if total:
            percentage = done / total * 100
            estimated_time = (elapsed_time / percentage) * (100 - percentage) if percentage else 0
            progress_string = (f'{bar} progress : {done}/{total} | Time spent: {self.format_time(elapsed_time)}'
                               f' | Time left: {self.format_time(estimated_time)}')
        else:
            progress_string = f'{bar} progress : {done} | Time spent: {self.format_time(elapsed_time)}'
        self._emit(progress_string)

    def format_time(self, seconds):
        minutes, seconds = divmod(seconds, 60)
        return f'{int(minutes)}m {int(seconds)}s'
