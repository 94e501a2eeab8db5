from .cli import main, reverify, run_command
from .io import InputError
