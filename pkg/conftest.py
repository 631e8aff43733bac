import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'ProjectDeligne.settings')
django.setup()
