import argparse
import sys

from .server import serve


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="policy-host",
        description="Serve one code policy over stdin/stdout.",
    )
    parser.add_argument("--source", required=True,
                        help="path to the policy source file")
    parser.add_argument("--game", required=True,
                        help="game identifier (informational)")
    args = parser.parse_args(argv)
    return serve(args.source, args.game)


if __name__ == "__main__":
    sys.exit(main())
