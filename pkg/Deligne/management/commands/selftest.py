import logging
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from Facades.selftest_facade import SelftestFacade
from Api.serializers import render_report




logger = logging.getLogger(__name__)



class Command(BaseCommand):
    help = 'Run the acceptance suites on the built-in fixtures'

    def add_arguments(self, parser):
        parser.add_argument('--full', action='store_true', help='run the full suites instead of the quick ones')
        parser.add_argument('--out', help='also write the JSON report to this path')


    def handle(self, *args, **options):
        level = 'full' if options['full'] else 'quick'
        report = SelftestFacade(threads=settings.DELIGNE.get('THREADS', 1)).selftest(level)

        for outcome in report['results']['suites']:
            line = f"{outcome['suite']}[{outcome['fixture']}]: {outcome['detail']}"
            if outcome['passed']:
                self.stdout.write(self.style.SUCCESS(f"ok    {line}"))
            else:
                self.stdout.write(self.style.ERROR(f"FAIL  {line}"))
        if options['out']:
            with open(options['out'], 'wb') as stream:
                stream.write(render_report(report))

        if not report['verified']:
            raise CommandError(f"{len(report['results']['failures'])} suites failed: "
                               f"{', '.join(report['results']['failures'])}", returncode=2)
        self.stdout.write(self.style.SUCCESS(f"{level} selftest passed"))
