import os
import time
import logging
from django.conf import settings
from django.test.utils import override_settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ParseError
from Algebra.exceptions import StructuralError, ChainComplexError, ResourceLimitExceeded
from Forms.problem_forms import ProblemForm, parse_window
from Facades.cohomology_facade import CohomologyFacade
from Facades.classification_facade import ClassificationFacade
from Api.serializers import ProblemSerializer, read_problem, render_report




logger = logging.getLogger(__name__)

FACADES = {task: facade for facade in (CohomologyFacade, ClassificationFacade) for task in facade.tasks}

WINDOWED_TASKS = ('compute', 'spectral', 'verify')



class Command(BaseCommand):
    help = 'Run a problem file and write its JSON report'

    def add_arguments(self, parser):
        parser.add_argument('problem', help='path of the problem file (JSON)')
        parser.add_argument('--out', help='report path; defaults to <problem>.report.json')
        parser.add_argument('--window', help='Deligne degrees a:b, overriding the file')
        parser.add_argument('--denom-bound', type=int, dest='denom_bound', help='denominator bound for enumerations and twist orbits')
        parser.add_argument('--threads', type=int, help='worker threads')
        parser.add_argument('--quiet', action='store_true', help='no summary on standard output')


    def handle(self, *args, **options):
        path = options['problem']
        out = options['out'] or f"{os.path.splitext(path)[0]}.report.json"
        engine = dict(settings.DELIGNE)
        if options['denom_bound'] is not None:
            engine['DENOMINATOR_BOUND'] = options['denom_bound']
        if options['threads'] is not None:
            engine['THREADS'] = options['threads']

        try:
            with open(path, 'rb') as stream:
                data = read_problem(stream)
        except FileNotFoundError:
            raise CommandError(f"problem: file {path} does not exist", returncode=1)
        except ParseError as e:
            raise CommandError(f"problem: {e.detail}", returncode=1)
        if not isinstance(data, dict):
            raise CommandError("problem: expected a JSON object", returncode=1)

        with override_settings(DELIGNE=engine):
            form = ProblemForm(data)
            if not form.is_valid():
                messages = [message for field in form.errors.values() for message in field]
                raise CommandError('\n'.join(messages), returncode=1)
            problem = form.cleaned_data['problem']
            if options['window']:
                if problem.task not in WINDOWED_TASKS:
                    raise CommandError(f"--window: task {problem.task} has no degree window", returncode=1)
                try:
                    problem.parameters['window'] = parse_window(options['window'])
                except ValueError as e:
                    raise CommandError(f"--window: {e}", returncode=1)

            started = time.perf_counter()
            try:
                report = FACADES[problem.task](threads=engine.get('THREADS', 1)).run(problem)
            except ChainComplexError as e:
                raise CommandError(f"verification failed: {e}", returncode=2)
            except (ValidationError, StructuralError) as e:
                detail = ' '.join(e.messages) if isinstance(e, ValidationError) else str(e)
                raise CommandError(f"parameters: {detail}", returncode=1)
            except ResourceLimitExceeded as e:
                raise CommandError(f"resource limit: {e}", returncode=1)
            elapsed = time.perf_counter() - started

        report['problem'] = ProblemSerializer(problem).data
        with open(out, 'wb') as stream:
            stream.write(render_report(report, problem.action))
        logger.info(f"Report written to {out} in {elapsed:.2f}s")

        if not options['quiet']:
            self.stdout.write(self.summary(report, out, elapsed))
        if not report['verified']:
            raise CommandError(f"verification failed; see {out}", returncode=2)


    def summary(self, report, out, elapsed):
        results = report['results']
        lines = [f"task {report['task']}: {'verified' if report['verified'] else 'verification FAILED'} in {elapsed:.2f}s"]
        if report['task'] == 'compute':
            for m, entry in sorted(results['cohomology'].items()):
                lines.append(f"  H^{m}(F̄({results['N']})) = {entry['group']}")
        elif report['task'] == 'verify':
            lines.append(f"  {results['sequence']}: {'exact' if results['exact'] else ', '.join(results['failures'])}")
        elif report['task'] == 'classify' and results['valid']:
            lines.append(f"  class {results['class'].as_dict()}  flat: {results['flat']}")
        elif report['task'] == 'obstruct':
            lines.append(f"  extendable: {results['extendable']}")
        lines.append(f"report: {out}")
        return self.style.SUCCESS('\n'.join(lines)) if report['verified'] else self.style.WARNING('\n'.join(lines))
