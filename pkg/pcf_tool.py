import logging
import sys

import pandas as pd

from pcf.cli import main

logging.basicConfig(level=logging.INFO, stream=sys.stderr)
logging.getLogger('pcf').setLevel(logging.INFO)
logging.getLogger('counterexample').setLevel(logging.INFO)
logging.getLogger('timeit').setLevel(logging.INFO)

pd.set_option('display.width', 320)
pd.set_option('display.max_columns', 20)
pd.set_option('display.max_rows', 500)
pd.set_option('display.max_colwidth', 80)


if __name__ == '__main__':
    sys.exit(main())
