import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        cfg = "Debug" if self.debug else "Release"
        src = Path(__file__).resolve().parent
        subprocess.check_call(
            [
                "cmake", str(src),
                f"-DCMAKE_BUILD_TYPE={cfg}",
                f"-DPython3_EXECUTABLE={sys.executable}",
                "-DSUBSHIFT_PYTHON_ONLY=ON",
                "-DSUBSHIFT_BUILD_TESTS=OFF",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out}",
            ],
            cwd=build_dir,
        )
        jobs = str(os.cpu_count() or 2)
        subprocess.check_call(["cmake", "--build", build_dir, "-j", jobs], cwd=build_dir)


setup(
    ext_modules=[CMakeExtension("subshift_forge._core")],
    cmdclass={"build_ext": CMakeBuild},
)
