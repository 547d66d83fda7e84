# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT
import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
