import shutil
import subprocess
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name, sourcedir=""):
        super().__init__(name, sources=[])
        self.sourcedir = str(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        import pybind11

        extdir = Path(self.get_ext_fullpath(ext.name)).parent.resolve()
        build_temp = Path(self.build_temp).resolve()
        build_temp.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                "-S", ext.sourcedir,
                "-B", str(build_temp),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DQMOMENTS_BUILD_TESTS=OFF",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_temp), "--target", "_qmoments", "-j"],
            check=True,
        )
        # get_ext_fullpath already points inside the qmoments package dir
        built = next((build_temp / "python" / "qmoments").glob("_qmoments*"))
        extdir.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, extdir / built.name)


setup(
    ext_modules=[CMakeExtension("qmoments._qmoments")],
    cmdclass={"build_ext": CMakeBuild},
)
