import { ApiClient } from './api'
import { initApp } from './app'

const baseUrl = (window as { JIRAGPT_API_BASE?: string }).JIRAGPT_API_BASE ?? ''
void initApp(document.getElementById('app')!, new ApiClient(baseUrl))
