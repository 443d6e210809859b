import sys

from dotenv import load_dotenv

load_dotenv()

from src.cli import run


def main():
    """命令行入口：python main.py basis fixtures/ex52 --strategy tilde-m --seed 7"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
