from facpl.main import main

main()
