# Main app package