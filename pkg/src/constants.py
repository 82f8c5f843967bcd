"""
Application-wide constants.

Shared command line conventions (empty word token, exit codes) and terminal
colours for diagnostics.
"""

import colorama

colorama.init(autoreset=True)

# Command line word conventions
EPSILON_TOKEN = "@eps"

# Exit codes
EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2

# Terminal colors (yes=green, no/error=red)
RED = colorama.Fore.RED
GREEN = colorama.Fore.GREEN
YELLOW = colorama.Fore.YELLOW
RESET = colorama.Style.RESET_ALL
