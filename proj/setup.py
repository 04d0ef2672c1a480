import os
import subprocess
import sys
from pathlib import Path

from setuptools import setup, Extension
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        src = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)
        out_dir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        subprocess.run(
            [
                "cmake", str(src),
                "-DFIELDLINK_PYTHON=ON",
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
                f"-DFIELDLINK_MODULE_OUTPUT={out_dir}",
            ],
            cwd=build_dir, check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_core",
             "-j", str(os.cpu_count() or 1)],
            cwd=build_dir, check=True,
        )


setup(
    ext_modules=[CMakeExtension("fieldlink._core")],
    cmdclass={"build_ext": CMakeBuild},
)
