from graphtsp.cli import main

main()
