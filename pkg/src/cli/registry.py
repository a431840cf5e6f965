from .commands import compare, hydro, ledger, simulate, spectrum, verify

# Every command module exposes NAME, HELP, add_arguments(parser) and handle(config)
COMMANDS = {module.NAME: module for module in (spectrum, verify, hydro, simulate, compare, ledger)}


def register(subparsers) -> None:
    for name, module in COMMANDS.items():
        parser = subparsers.add_parser(name, help=module.HELP)
        module.add_arguments(parser)


def get_command(name: str):
    return COMMANDS[name]
