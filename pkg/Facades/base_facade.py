import logging
from concurrent.futures import ThreadPoolExecutor
from django.conf import settings
from django.core.exceptions import ValidationError
from Algebra.exceptions import StructuralError, ResourceLimitExceeded
from Deligne.engine import CONVENTIONS







logger = logging.getLogger(__name__)



class BaseFacade:

    """
    Turns a validated Problem into engine calls and a report dict
    {task, results, conventions, timing, verified}. Subclasses implement one method per
    task they serve, named after the task.
    """

    tasks = ()


    def __init__(self, threads=None):
        self.threads = threads or settings.DELIGNE.get('THREADS', 1)
        self.timing = {}


    def run(self, problem):

        """
        Runs the task of a problem.

        Args:
            problem (Problem): the cleaned problem from ProblemForm.

        Returns:
            dict: the report; `verified` is False when a check the task performs fails.

        Raises:
            ValidationError: if an input violates a precondition (not a cocycle, ...).
            StructuralError: if the input does not fit the model.
            ResourceLimitExceeded: if a space is larger than DELIGNE['MAX_DIMENSION'].
        """

        if problem.task not in self.tasks:
            raise StructuralError(f"{type(self).__name__} does not run {problem.task!r} tasks")
        logger.info(f"Starting task {problem.task} on {problem.action}")
        self.timing = {}
        try:
            results, verified = getattr(self, problem.task)(problem)
        except (ValidationError, StructuralError) as e:
            logger.error(f"Task {problem.task} rejected its input: {e}")
            raise
        except ResourceLimitExceeded as e:
            logger.error(f"Task {problem.task} exceeded the dimension limit at {e.dimension}: {e}")
            raise
        except Exception as e:
            logger.error(f"Unexpected error in task {problem.task}: {e}", exc_info=True)
            raise

        logger.info(f"Finished task {problem.task}: {'verified' if verified else 'verification failed'}")
        return {
            'task': problem.task,
            'results': results,
            'conventions': dict(CONVENTIONS),
            'timing': self.timing,
            'verified': verified,
        }


    def parallel(self, function, items):

        """ function over items with DELIGNE['THREADS'] workers; results keep the order of items. """

        items = list(items)
        if self.threads <= 1 or len(items) <= 1:
            return [function(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(function, items))


    def record_timing(self, key, counters):
        self.timing[str(key)] = counters
