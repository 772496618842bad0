#!/usr/bin/env python3
# Copyright 2026 The vocabplan Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Prepend the license header in .license_header to every source file that lacks it."""

import argparse
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
SOURCE_DIRS = ("include", "src", "tests", "tools")
CPP_SUFFIXES = {".cpp", ".hpp", ".h", ".cc"}
HASH_SUFFIXES = {".py", ".cmake"}


def header_for(path: pathlib.Path, cpp_header: str) -> str | None:
    if path.suffix in CPP_SUFFIXES:
        return cpp_header
    if path.suffix in HASH_SUFFIXES or path.name == "CMakeLists.txt":
        return "".join("#" + line[2:] if line.startswith("//") else line for line in cpp_header.splitlines(True))
    return None


def candidates() -> list[pathlib.Path]:
    files = [ROOT / "CMakeLists.txt"]
    for d in SOURCE_DIRS:
        files.extend(p for p in sorted((ROOT / d).rglob("*")) if p.is_file())
    return files


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check", action="store_true", help="only report files without the header")
    args = parser.parse_args()

    cpp_header = (ROOT / ".license_header").read_text()
    if not cpp_header.endswith("\n"):
        cpp_header += "\n"
    missing = []
    for path in candidates():
        header = header_for(path, cpp_header)
        if header is None:
            continue
        text = path.read_text()
        first_line = header.splitlines()[0]
        body = text
        shebang = ""
        if text.startswith("#!"):
            shebang, _, body = text.partition("\n")
            shebang += "\n"
        if body.startswith(first_line):
            continue
        missing.append(path)
        if not args.check:
            path.write_text(shebang + header + "\n" + body)
    for path in missing:
        print(("missing: " if args.check else "added: ") + str(path.relative_to(ROOT)))
    return 1 if args.check and missing else 0


if __name__ == "__main__":
    sys.exit(main())
