from setuptools import setup, find_packages

setup(
    name="orbitlab",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy",
        "scipy",
        "joblib",
        "jsonschema",
        "requests",
        "python-dotenv",
    ],
    extras_require={
        "dev": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "orbitlab=orbitlab.cli:main",
        ],
    },
)
