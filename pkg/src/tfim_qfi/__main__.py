import sys
from tfim_qfi.cli import main
sys.exit(main())
