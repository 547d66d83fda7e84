# SPDX-FileCopyrightText: 2022-present Artur Drogunow <artur.drogunow@zf.com>
#
# SPDX-License-Identifier: MIT

from typing import Any, Dict, Final

RC: Final[Dict[str, Any]] = {
    "ENCODING": "utf-8",
    "STATE_CAP": 2**20,
    "HORN_VARIABLE_CAP": 16,
    "EXPORT_STATE_CAP": 4096,
    "VALIDATION_PLAYS": 100,
    "VALIDATION_ADVERSARIAL_PLAYS": 20,
    "VALIDATION_HORIZON": 50,
    "MIN_DD_VERSION": "0.5.7",
}  # runtime config
